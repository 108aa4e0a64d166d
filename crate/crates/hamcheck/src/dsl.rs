//! A small line-oriented document language for declaring brackets,
//! functionals and substitutions, plus the expression grammar shared with the
//! command-line flags.
//!
//! ```text
//! # KdV with the Gardner bracket
//! var u on S1
//! op P = D_x
//! func H = int(-1/2*u_x^2 + 1/6*u^3)
//! ```
//!
//! Expressions are sums of products of rationals and jet variables; derivative
//! subscripts are spelled `u_x`, `u_xxy`, .... Operator expressions extend the
//! grammar with `D_x`, `D_y` and `Id`, with `*` acting as composition.
//! Multiplication is always explicit and coefficients are exact rationals
//! (`1/2`, never `0.5`).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::diffop::LinDiffOp;
use crate::jetcalc::{Coeff, Domain, JetExpr, JetVar, LocalFunctional, MultiIndex};

/// Parse failure with a 1-based source position.
#[derive(Debug, Clone)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(BigInt),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    Equals,
    Arrow,
    Newline,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err(line: usize, col: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        col,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (li, raw_line) in text.lines().enumerate() {
        let line = li + 1;
        let code = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        };
        let chars: Vec<char> = code.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            match c {
                ' ' | '\t' | '\r' => {
                    i += 1;
                }
                '+' => {
                    out.push(Token { tok: Tok::Plus, line, col });
                    i += 1;
                }
                '-' => {
                    if chars.get(i + 1) == Some(&'>') {
                        out.push(Token { tok: Tok::Arrow, line, col });
                        i += 2;
                    } else {
                        out.push(Token { tok: Tok::Minus, line, col });
                        i += 1;
                    }
                }
                '*' => {
                    out.push(Token { tok: Tok::Star, line, col });
                    i += 1;
                }
                '^' => {
                    out.push(Token { tok: Tok::Caret, line, col });
                    i += 1;
                }
                '/' => {
                    out.push(Token { tok: Tok::Slash, line, col });
                    i += 1;
                }
                '(' => {
                    out.push(Token { tok: Tok::LParen, line, col });
                    i += 1;
                }
                ')' => {
                    out.push(Token { tok: Tok::RParen, line, col });
                    i += 1;
                }
                '=' => {
                    out.push(Token { tok: Tok::Equals, line, col });
                    i += 1;
                }
                c if c.is_ascii_digit() => {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let digits: String = chars[start..i].iter().collect();
                    let n = digits.parse::<BigInt>().expect("digits parse");
                    out.push(Token { tok: Tok::Number(n), line, col });
                }
                c if c.is_ascii_alphabetic() => {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                        i += 1;
                    }
                    // a trailing subscript block: underscore plus x/y letters
                    if i < chars.len() && chars[i] == '_' {
                        let mut j = i + 1;
                        while j < chars.len() && (chars[j] == 'x' || chars[j] == 'y') {
                            j += 1;
                        }
                        if j > i + 1 {
                            i = j;
                        } else {
                            return Err(err(
                                line,
                                i + 2,
                                "expected derivative subscript letters x or y after '_'",
                            ));
                        }
                    }
                    let ident: String = chars[start..i].iter().collect();
                    out.push(Token { tok: Tok::Ident(ident), line, col });
                }
                other => {
                    return Err(err(line, col, format!("unexpected character {:?}", other)));
                }
            }
        }
        out.push(Token {
            tok: Tok::Newline,
            line,
            col: chars.len() + 1,
        });
    }
    Ok(out)
}

/// A named declaration set: state variables, operators, functionals, directly
/// supplied gradients and substitutions.
#[derive(Clone, Debug, Default)]
pub struct DslDocument {
    pub vars: Vec<(String, Domain)>,
    pub ops: Vec<(String, LinDiffOp)>,
    pub funcs: Vec<(String, LocalFunctional)>,
    pub grads: Vec<(String, JetExpr)>,
    pub substs: Vec<(String, JetExpr)>,
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    dim: usize,
    var_names: Vec<String>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<&Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        match self.tokens.get(self.pos) {
            Some(t) => (t.line, t.col),
            None => match self.tokens.last() {
                Some(t) => (t.line, t.col),
                None => (1, 1),
            },
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        let (line, col) = self.here();
        match self.next() {
            Some(t) if t.tok == tok => Ok(()),
            Some(t) => Err(err(
                t.line,
                t.col,
                format!("expected {}, found {}", what, describe(&t.tok)),
            )),
            None => Err(err(line, col, format!("expected {}, found end of input", what))),
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<(String, usize, usize), ParseError> {
        let (line, col) = self.here();
        match self.next() {
            Some(Token {
                tok: Tok::Ident(s),
                line,
                col,
            }) => Ok((s.clone(), *line, *col)),
            Some(t) => Err(err(
                t.line,
                t.col,
                format!("expected {}, found {}", what, describe(&t.tok)),
            )),
            None => Err(err(line, col, format!("expected {}, found end of input", what))),
        }
    }

    fn skip_newlines(&mut self) {
        while matches!(self.peek(), Some(Token { tok: Tok::Newline, .. })) {
            self.pos += 1;
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    /// Splits an identifier into a variable name and its derivative
    /// multi-index, validating against the document dimension.
    fn jet_var(&self, ident: &str, line: usize, col: usize) -> Result<JetVar, ParseError> {
        let (name, subscript) = match ident.find('_') {
            Some(pos) => (&ident[..pos], &ident[pos + 1..]),
            None => (ident, ""),
        };
        let mut jx = 0u32;
        let mut jy = 0u32;
        for c in subscript.chars() {
            match c {
                'x' => jx += 1,
                'y' => jy += 1,
                _ => unreachable!("lexer only allows x/y subscripts"),
            }
        }
        if jy > 0 && self.dim == 1 {
            return Err(err(
                line,
                col,
                format!("derivative in y is invalid on S1 (variable {})", ident),
            ));
        }
        if !self.var_names.iter().any(|v| v == name) {
            return Err(err(line, col, format!("unknown identifier {}", name)));
        }
        let index = if self.dim == 1 {
            MultiIndex::d1(jx)
        } else {
            MultiIndex::d2(jx, jy)
        };
        Ok(JetVar::new(name, index))
    }

    fn rational(&mut self, first: BigInt) -> Result<Coeff, ParseError> {
        if matches!(self.peek(), Some(Token { tok: Tok::Slash, .. })) {
            self.pos += 1;
            let (line, col) = self.here();
            match self.next() {
                Some(Token {
                    tok: Tok::Number(d),
                    line,
                    col,
                }) => {
                    if d.is_zero() {
                        return Err(err(*line, *col, "zero denominator"));
                    }
                    Ok(BigRational::new(first, d.clone()))
                }
                Some(t) => Err(err(
                    t.line,
                    t.col,
                    format!("expected denominator, found {}", describe(&t.tok)),
                )),
                None => Err(err(line, col, "expected denominator, found end of input")),
            }
        } else {
            Ok(BigRational::from_integer(first))
        }
    }

    fn nat_exponent(&mut self) -> Result<u32, ParseError> {
        let (line, col) = self.here();
        match self.next() {
            Some(Token {
                tok: Tok::Number(n),
                line,
                col,
            }) => n
                .try_into()
                .map_err(|_| err(*line, *col, "exponent too large")),
            Some(t) => Err(err(
                t.line,
                t.col,
                format!("expected exponent, found {}", describe(&t.tok)),
            )),
            None => Err(err(line, col, "expected exponent, found end of input")),
        }
    }

    // ---- scalar expression grammar ----

    fn expr(&mut self) -> Result<JetExpr, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek().map(|t| t.tok.clone()) {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<JetExpr, ParseError> {
        let mut acc = self.factor()?;
        while matches!(self.peek(), Some(Token { tok: Tok::Star, .. })) {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<JetExpr, ParseError> {
        if matches!(self.peek(), Some(Token { tok: Tok::Minus, .. })) {
            self.pos += 1;
            return Ok(-self.factor()?);
        }
        let mut base = self.base()?;
        if matches!(self.peek(), Some(Token { tok: Tok::Caret, .. })) {
            self.pos += 1;
            base = base.pow(self.nat_exponent()?);
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<JetExpr, ParseError> {
        let (line, col) = self.here();
        match self.next().cloned() {
            Some(Token {
                tok: Tok::Number(n),
                ..
            }) => Ok(JetExpr::constant(self.dim, self.rational(n)?)),
            Some(Token {
                tok: Tok::Ident(id),
                line,
                col,
            }) => {
                if id == "D_x" || id == "D_y" || id == "Id" {
                    return Err(err(
                        line,
                        col,
                        format!("operator symbol {} is not valid in a density expression", id),
                    ));
                }
                Ok(JetExpr::jet(self.jet_var(&id, line, col)?))
            }
            Some(Token { tok: Tok::LParen, .. }) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(t) => Err(err(
                t.line,
                t.col,
                format!("expected expression, found {}", describe(&t.tok)),
            )),
            None => Err(err(line, col, "expected expression, found end of input")),
        }
    }

    // ---- operator expression grammar ----

    fn op_expr(&mut self) -> Result<LinDiffOp, ParseError> {
        let mut acc = self.op_term()?;
        loop {
            match self.peek().map(|t| t.tok.clone()) {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.op_term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.op_term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn op_term(&mut self) -> Result<LinDiffOp, ParseError> {
        let mut acc = self.op_factor()?;
        while matches!(self.peek(), Some(Token { tok: Tok::Star, .. })) {
            self.pos += 1;
            acc = acc.compose(&self.op_factor()?);
        }
        Ok(acc)
    }

    fn op_factor(&mut self) -> Result<LinDiffOp, ParseError> {
        if matches!(self.peek(), Some(Token { tok: Tok::Minus, .. })) {
            self.pos += 1;
            return Ok(-self.op_factor()?);
        }
        let mut base = self.op_base()?;
        if matches!(self.peek(), Some(Token { tok: Tok::Caret, .. })) {
            self.pos += 1;
            let e = self.nat_exponent()?;
            let mut acc = LinDiffOp::identity(self.dim);
            for _ in 0..e {
                acc = acc.compose(&base);
            }
            base = acc;
        }
        Ok(base)
    }

    fn op_base(&mut self) -> Result<LinDiffOp, ParseError> {
        let (line, col) = self.here();
        match self.next().cloned() {
            Some(Token {
                tok: Tok::Number(n),
                ..
            }) => Ok(LinDiffOp::mult(JetExpr::constant(
                self.dim,
                self.rational(n)?,
            ))),
            Some(Token {
                tok: Tok::Ident(id),
                line,
                col,
            }) => match id.as_str() {
                "Id" => Ok(LinDiffOp::identity(self.dim)),
                "D_x" => Ok(LinDiffOp::derivative(self.dim, 0)),
                "D_y" => {
                    if self.dim == 1 {
                        Err(err(line, col, "D_y is invalid on S1"))
                    } else {
                        Ok(LinDiffOp::derivative(self.dim, 1))
                    }
                }
                _ => Ok(LinDiffOp::mult(JetExpr::jet(self.jet_var(&id, line, col)?))),
            },
            Some(Token { tok: Tok::LParen, .. }) => {
                let inner = self.op_expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(t) => Err(err(
                t.line,
                t.col,
                format!("expected operator expression, found {}", describe(&t.tok)),
            )),
            None => Err(err(
                line,
                col,
                "expected operator expression, found end of input",
            )),
        }
    }

    fn functional_body(&mut self) -> Result<LocalFunctional, ParseError> {
        let (name, line, col) = self.expect_ident("'int'")?;
        if name != "int" {
            return Err(err(line, col, format!("expected 'int', found {}", name)));
        }
        self.expect(Tok::LParen, "'('")?;
        let density = self.expr()?;
        self.expect(Tok::RParen, "')'")?;
        Ok(LocalFunctional::new(density, Domain::from_dim(self.dim)))
    }

    fn end_of_statement(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(Token { tok: Tok::Newline, .. }) => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(err(
                t.line,
                t.col,
                format!("unexpected {} after declaration", describe(&t.tok)),
            )),
        }
    }
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Ident(s) => format!("identifier {}", s),
        Tok::Number(n) => format!("number {}", n),
        Tok::Plus => "'+'".to_string(),
        Tok::Minus => "'-'".to_string(),
        Tok::Star => "'*'".to_string(),
        Tok::Caret => "'^'".to_string(),
        Tok::Slash => "'/'".to_string(),
        Tok::LParen => "'('".to_string(),
        Tok::RParen => "')'".to_string(),
        Tok::Equals => "'='".to_string(),
        Tok::Arrow => "'->'".to_string(),
        Tok::Newline => "end of line".to_string(),
    }
}

/// Pre-scan for `var NAME on DOMAIN` declarations, which fix the document
/// dimension and the set of legal dependent variables.
fn scan_vars(tokens: &[Token]) -> Result<Vec<(String, Domain)>, ParseError> {
    let mut vars: Vec<(String, Domain)> = Vec::new();
    let mut i = 0;
    let mut at_line_start = true;
    while i < tokens.len() {
        let t = &tokens[i];
        if t.tok == Tok::Newline {
            at_line_start = true;
            i += 1;
            continue;
        }
        if at_line_start {
            if let Tok::Ident(name) = &t.tok {
                if name == "var" {
                    let var_name = match tokens.get(i + 1) {
                        Some(Token {
                            tok: Tok::Ident(n), ..
                        }) => n.clone(),
                        other => {
                            let (l, c) = other
                                .map(|t| (t.line, t.col))
                                .unwrap_or((t.line, t.col + 3));
                            return Err(err(l, c, "expected variable name after 'var'"));
                        }
                    };
                    match tokens.get(i + 2) {
                        Some(Token {
                            tok: Tok::Ident(on),
                            ..
                        }) if on == "on" => {}
                        other => {
                            let (l, c) = other
                                .map(|t| (t.line, t.col))
                                .unwrap_or((t.line, t.col));
                            return Err(err(l, c, "expected 'on' in var declaration"));
                        }
                    }
                    let domain = match tokens.get(i + 3) {
                        Some(Token {
                            tok: Tok::Ident(d), ..
                        }) if d == "S1" => Domain::Circle,
                        Some(Token {
                            tok: Tok::Ident(d), ..
                        }) if d == "T2" => Domain::Torus,
                        other => {
                            let (l, c) = other
                                .map(|t| (t.line, t.col))
                                .unwrap_or((t.line, t.col));
                            return Err(err(l, c, "expected domain S1 or T2"));
                        }
                    };
                    if var_name.contains('_') || ["D", "Id", "int"].contains(&var_name.as_str()) {
                        let tn = &tokens[i + 1];
                        return Err(err(tn.line, tn.col, "reserved or invalid variable name"));
                    }
                    vars.push((var_name, domain));
                    i += 4;
                    at_line_start = false;
                    continue;
                }
            }
            at_line_start = false;
        }
        i += 1;
    }
    if let Some(((_, first), rest)) = vars.split_first().map(|(f, r)| ((f.0.clone(), f.1), r)) {
        for (name, d) in rest {
            if *d != first {
                return Err(err(1, 1, format!("variable {} uses a different domain", name)));
            }
        }
    }
    Ok(vars)
}

impl DslDocument {
    /// Parses a complete document. The first `var` declaration names the
    /// bracket state variable; all variables must share one domain.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let tokens = tokenize(text)?;
        let vars = scan_vars(&tokens)?;
        let dim = vars.first().map(|(_, d)| d.dim()).unwrap_or(1);
        let var_names: Vec<String> = vars.iter().map(|(n, _)| n.clone()).collect();

        let mut doc = DslDocument {
            vars,
            ..Default::default()
        };
        let mut used_names: Vec<String> = doc.vars.iter().map(|(n, _)| n.clone()).collect();
        {
            let mut seen: Vec<&String> = Vec::new();
            for n in &used_names {
                if seen.contains(&n) {
                    return Err(err(1, 1, format!("duplicate declaration of {}", n)));
                }
                seen.push(n);
            }
        }

        let mut p = Parser {
            tokens: &tokens,
            pos: 0,
            dim,
            var_names,
        };
        p.skip_newlines();
        while !p.at_end() {
            let (kw, line, col) = p.expect_ident("declaration keyword")?;
            match kw.as_str() {
                "var" => {
                    // validated in the pre-scan
                    p.expect_ident("variable name")?;
                    p.expect_ident("'on'")?;
                    p.expect_ident("domain")?;
                }
                "op" => {
                    let (name, nline, ncol) = p.expect_ident("operator name")?;
                    if used_names.contains(&name) {
                        return Err(err(nline, ncol, format!("duplicate declaration of {}", name)));
                    }
                    p.expect(Tok::Equals, "'='")?;
                    let op = p.op_expr()?;
                    used_names.push(name.clone());
                    doc.ops.push((name, op));
                }
                "func" => {
                    let (name, nline, ncol) = p.expect_ident("functional name")?;
                    if used_names.contains(&name) {
                        return Err(err(nline, ncol, format!("duplicate declaration of {}", name)));
                    }
                    p.expect(Tok::Equals, "'='")?;
                    let f = p.functional_body()?;
                    used_names.push(name.clone());
                    doc.funcs.push((name, f));
                }
                "grad" => {
                    let (name, nline, ncol) = p.expect_ident("gradient name")?;
                    if used_names.contains(&name) {
                        return Err(err(nline, ncol, format!("duplicate declaration of {}", name)));
                    }
                    p.expect(Tok::Equals, "'='")?;
                    let e = p.expr()?;
                    used_names.push(name.clone());
                    doc.grads.push((name, e));
                }
                "subst" => {
                    let (name, nline, ncol) = p.expect_ident("variable name")?;
                    if !doc.vars.iter().any(|(v, _)| *v == name) {
                        return Err(err(nline, ncol, format!("unknown identifier {}", name)));
                    }
                    p.expect(Tok::Arrow, "'->'")?;
                    let e = p.expr()?;
                    if e.dependent_vars().contains(&name) {
                        return Err(err(
                            nline,
                            ncol,
                            format!("cyclic substitution: replacement for {} involves {}", name, name),
                        ));
                    }
                    doc.substs.push((name, e));
                }
                other => {
                    return Err(err(
                        line,
                        col,
                        format!(
                            "unknown declaration {:?} (expected var, op, func, grad or subst)",
                            other
                        ),
                    ));
                }
            }
            p.end_of_statement()?;
            p.skip_newlines();
        }
        Ok(doc)
    }

    /// The bracket state variable: the first declared variable.
    pub fn state_var(&self) -> Option<(&str, Domain)> {
        self.vars.first().map(|(n, d)| (n.as_str(), *d))
    }

    pub fn dim(&self) -> usize {
        self.vars.first().map(|(_, d)| d.dim()).unwrap_or(1)
    }

    fn flag_parser<'a>(&self, tokens: &'a [Token]) -> Parser<'a> {
        Parser {
            tokens,
            pos: 0,
            dim: self.dim(),
            var_names: self.vars.iter().map(|(n, _)| n.clone()).collect(),
        }
    }

    /// Parses a standalone expression (e.g. a `--grad` flag) in this
    /// document's variable context.
    pub fn parse_expr(&self, text: &str) -> Result<JetExpr, ParseError> {
        let tokens = tokenize(text)?;
        let mut p = self.flag_parser(&tokens);
        p.skip_newlines();
        let e = p.expr()?;
        p.skip_newlines();
        if !p.at_end() {
            let (l, c) = p.here();
            return Err(err(l, c, "unexpected trailing input"));
        }
        Ok(e)
    }

    /// Parses `int(<density>)` (e.g. a `--casimir` flag).
    pub fn parse_functional(&self, text: &str) -> Result<LocalFunctional, ParseError> {
        let tokens = tokenize(text)?;
        let mut p = self.flag_parser(&tokens);
        p.skip_newlines();
        let f = p.functional_body()?;
        p.skip_newlines();
        if !p.at_end() {
            let (l, c) = p.here();
            return Err(err(l, c, "unexpected trailing input"));
        }
        Ok(f)
    }

    /// Parses `name -> <expr>` (e.g. a `--subst` flag).
    pub fn parse_subst(&self, text: &str) -> Result<(String, JetExpr), ParseError> {
        let tokens = tokenize(text)?;
        let mut p = self.flag_parser(&tokens);
        p.skip_newlines();
        let (name, line, col) = p.expect_ident("variable name")?;
        if !self.vars.iter().any(|(v, _)| *v == name) {
            return Err(err(line, col, format!("unknown identifier {}", name)));
        }
        p.expect(Tok::Arrow, "'->'")?;
        let e = p.expr()?;
        if e.dependent_vars().contains(&name) {
            return Err(err(
                line,
                col,
                format!("cyclic substitution: replacement for {} involves {}", name, name),
            ));
        }
        p.skip_newlines();
        if !p.at_end() {
            let (l, c) = p.here();
            return Err(err(l, c, "unexpected trailing input"));
        }
        Ok((name, e))
    }

    /// Canonical text form; `parse` of the output reproduces the document.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (n, d) in &self.vars {
            out.push_str(&format!("var {} on {}\n", n, d));
        }
        for (n, op) in &self.ops {
            out.push_str(&format!("op {} = {}\n", n, op));
        }
        for (n, f) in &self.funcs {
            out.push_str(&format!("func {} = {}\n", n, f));
        }
        for (n, e) in &self.grads {
            out.push_str(&format!("grad {} = {}\n", n, e));
        }
        for (n, e) in &self.substs {
            out.push_str(&format!("subst {} -> {}\n", n, e));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bracket::lie_poisson_operator;
    use crate::jetcalc::rat;

    #[test]
    fn parses_lie_poisson_document() {
        let doc = DslDocument::parse(
            "# inviscid Burgers as an Euler equation\nvar m on S1\nop P = -(2*m*D_x + m_x*Id)\nfunc H = int(1/2*m^2)\n",
        )
        .unwrap();
        assert_eq!(doc.state_var().unwrap().0, "m");
        assert_eq!(doc.ops[0].1, lie_poisson_operator("m"));
        let expected = JetExpr::var("m", 1).pow(2).scale(&rat(1, 2));
        assert_eq!(doc.funcs[0].1.density(), &expected);
    }

    #[test]
    fn parses_gardner_hamiltonian() {
        let doc = DslDocument::parse(
            "var u on S1\nop P = D_x\nfunc H = int(-1/2*u_x^2 + 1/6*u^3)\n",
        )
        .unwrap();
        let u = JetExpr::var("u", 1);
        let u_x = JetExpr::jet(JetVar::new("u", MultiIndex::d1(1)));
        let expected = &u.pow(3).scale(&rat(1, 6)) - &u_x.pow(2).scale(&rat(1, 2));
        assert_eq!(doc.funcs[0].1.density(), &expected);
    }

    #[test]
    fn rejects_double_star() {
        let e = DslDocument::parse("var u on S1\nfunc H = int(u_x ** 2)\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains("'*'"), "{}", e.message);
    }

    #[test]
    fn rejects_unknown_identifier() {
        let e = DslDocument::parse("var u on S1\nfunc H = int(v^2)\n").unwrap_err();
        assert!(e.message.contains("unknown identifier v"));
        assert_eq!((e.line, e.col), (2, 14));
    }

    #[test]
    fn rejects_d_y_on_circle() {
        let e = DslDocument::parse("var u on S1\nop P = D_y\n").unwrap_err();
        assert!(e.message.contains("D_y is invalid on S1"));
    }

    #[test]
    fn rejects_y_subscript_on_circle() {
        let e = DslDocument::parse("var u on S1\nfunc H = int(u_xy)\n").unwrap_err();
        assert!(e.message.contains("derivative in y"));
    }

    #[test]
    fn torus_operator_parses() {
        let doc =
            DslDocument::parse("var omega on T2\nop P = omega_x*D_y - omega_y*D_x\n").unwrap();
        assert_eq!(doc.ops[0].1, crate::bracket::vorticity_operator("omega"));
    }

    #[test]
    fn composition_in_operator_products() {
        // D_x * m means D_x ∘ m = m D_x + m_x Id
        let doc = DslDocument::parse("var m on S1\nop P = D_x*m\n").unwrap();
        let m = JetExpr::var("m", 1);
        let m_x = JetExpr::jet(JetVar::new("m", MultiIndex::d1(1)));
        let expected =
            &LinDiffOp::monomial(MultiIndex::d1(1), m) + &LinDiffOp::mult(m_x);
        assert_eq!(doc.ops[0].1, expected);
        // and the paper-style symmetrized form equals the expanded one
        let doc2 = DslDocument::parse("var m on S1\nop P = -(m*D_x + D_x*m)\n").unwrap();
        assert_eq!(doc2.ops[0].1, lie_poisson_operator("m"));
    }

    #[test]
    fn substitution_declarations() {
        let doc = DslDocument::parse(
            "var m on S1\nvar u on S1\nop P = -(2*m*D_x + m_x*Id)\ngrad H = u\nsubst m -> u - u_xx\n",
        )
        .unwrap();
        assert_eq!(doc.grads[0].1, JetExpr::var("u", 1));
        let u = JetExpr::var("u", 1);
        let u_xx = JetExpr::jet(JetVar::new("u", MultiIndex::d1(2)));
        assert_eq!(doc.substs[0].1, &u - &u_xx);
    }

    #[test]
    fn rejects_cyclic_substitution() {
        let e = DslDocument::parse("var m on S1\nsubst m -> m + 1\n").unwrap_err();
        assert!(e.message.contains("cyclic"));
    }

    #[test]
    fn rejects_duplicate_names() {
        let e = DslDocument::parse("var u on S1\nfunc H = int(u)\nfunc H = int(u^2)\n").unwrap_err();
        assert!(e.message.contains("duplicate"));
    }

    #[test]
    fn rejects_mixed_domains() {
        let e = DslDocument::parse("var u on S1\nvar w on T2\n").unwrap_err();
        assert!(e.message.contains("different domain"));
    }

    #[test]
    fn pretty_print_round_trip_is_idempotent() {
        let sources = [
            "var u on S1\nop P = D_x\nfunc H = int(-1/2*u_x^2 + 1/6*u^3)\n",
            "var m on S1\nvar u on S1\nop P = -(2*m*D_x + m_x*Id)\ngrad H = u\nsubst m -> u - u_xx\n",
            "var omega on T2\nop P = omega_x*D_y - omega_y*D_x\nfunc Z = int(omega^3)\n",
        ];
        for src in sources {
            let once = DslDocument::parse(src).unwrap().to_text();
            let twice = DslDocument::parse(&once).unwrap().to_text();
            assert_eq!(once, twice, "not idempotent for {:?}", src);
        }
    }

    #[test]
    fn flag_expression_parsing() {
        let doc = DslDocument::parse("var m on S1\nvar u on S1\n").unwrap();
        let (v, e) = doc.parse_subst("m -> u - u_xx").unwrap();
        assert_eq!(v, "m");
        assert_eq!(e.to_string(), "u - u_xx");
        let f = doc.parse_functional("int(m)").unwrap();
        assert_eq!(f.density(), &JetExpr::var("m", 1));
        assert!(doc.parse_expr("q + 1").is_err());
    }
}
