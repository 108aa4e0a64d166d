//! Linear differential operators with differential-polynomial coefficients.
//!
//! An operator is stored post-expansion as a finite map `J -> a_J`, meaning
//! `sum_J a_J D_J` with all coefficients to the left of pure derivative
//! powers. Equality of operators is therefore syntactic on the coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed};

use crate::jetcalc::{Coeff, JetExpr, MultiIndex};

/// `sum_J a_J D_J` with [`JetExpr`] coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinDiffOp {
    dim: u8,
    terms: BTreeMap<MultiIndex, JetExpr>,
}

impl LinDiffOp {
    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1 && dim <= crate::jetcalc::MAX_DIM);
        LinDiffOp {
            dim: dim as u8,
            terms: BTreeMap::new(),
        }
    }

    /// The identity operator (multiplication by one).
    pub fn identity(dim: usize) -> Self {
        LinDiffOp::monomial(MultiIndex::zero(dim), JetExpr::one(dim))
    }

    /// The total derivative `D` along `axis`.
    pub fn derivative(dim: usize, axis: usize) -> Self {
        LinDiffOp::monomial(MultiIndex::zero(dim).raised(axis), JetExpr::one(dim))
    }

    /// A single term `coeff * D_J`.
    pub fn monomial(j: MultiIndex, coeff: JetExpr) -> Self {
        assert_eq!(j.dim(), coeff.dim(), "multi-index dimension mismatch");
        let mut op = LinDiffOp::zero(j.dim());
        op.add_term(j, coeff);
        op
    }

    /// Multiplication operator `coeff * Id`.
    pub fn mult(coeff: JetExpr) -> Self {
        LinDiffOp::monomial(MultiIndex::zero(coeff.dim()), coeff)
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest total order of any derivative term.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(|j| j.order()).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &JetExpr)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, j: &MultiIndex) -> JetExpr {
        self.terms
            .get(j)
            .cloned()
            .unwrap_or_else(|| JetExpr::zero(self.dim()))
    }

    fn add_term(&mut self, j: MultiIndex, coeff: JetExpr) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(j) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Coeff) -> LinDiffOp {
        let mut out = LinDiffOp::zero(self.dim());
        for (j, a) in &self.terms {
            out.add_term(*j, a.scale(c));
        }
        out
    }

    /// Left multiplication by a differential polynomial: `e * P`.
    pub fn premultiply(&self, e: &JetExpr) -> LinDiffOp {
        let mut out = LinDiffOp::zero(self.dim());
        for (j, a) in &self.terms {
            out.add_term(*j, e * a);
        }
        out
    }

    /// Apply the operator to an expression: `sum_J a_J D_J(e)`.
    pub fn apply(&self, e: &JetExpr) -> JetExpr {
        assert_eq!(
            e.dim(),
            self.dim(),
            "independent-variable count mismatch between operator and expression"
        );
        let mut out = JetExpr::zero(self.dim());
        for (j, a) in &self.terms {
            out = &out + &(a * &e.total_derivative_multi(j));
        }
        out
    }

    /// Operator composition: `(P ∘ Q)(e) = P(Q(e))` for every `e`, expanded
    /// by the Leibniz rule so that coefficients stay left of derivatives.
    pub fn compose(&self, other: &LinDiffOp) -> LinDiffOp {
        assert_eq!(self.dim, other.dim, "operator dimension mismatch");
        let mut out = LinDiffOp::zero(self.dim());
        for (j, a) in &self.terms {
            for (k, b) in &other.terms {
                // D_J (b * D_K .) = sum_{I <= J} C(J,I) D_I(b) D_{J-I+K}
                for i in j.sub_indices() {
                    let coeff = Coeff::from_integer(j.binomial(&i));
                    let di_b = b.total_derivative_multi(&i).scale(&coeff);
                    out.add_term(j.minus(&i).plus(k), a * &di_b);
                }
            }
        }
        out
    }

    /// Formal adjoint with respect to the L2 pairing: transposes each term
    /// `a_J D_J` into `(-D)_J ∘ a_J` and re-expands.
    pub fn adjoint(&self) -> LinDiffOp {
        let mut out = LinDiffOp::zero(self.dim());
        for (j, a) in &self.terms {
            // (-1)^{|J|} sum_{I <= J} C(J,I) D_I(a) D_{J-I}
            let sign = if j.order() % 2 == 0 {
                Coeff::one()
            } else {
                -Coeff::one()
            };
            for i in j.sub_indices() {
                let coeff = &sign * Coeff::from_integer(j.binomial(&i));
                out.add_term(j.minus(&i), a.total_derivative_multi(&i).scale(&coeff));
            }
        }
        out
    }

    /// `P + P*`; zero exactly when the operator is skew-symmetric.
    pub fn skew_defect(&self) -> LinDiffOp {
        self + &self.adjoint()
    }

    /// Coefficient-wise skew-symmetry certificate.
    pub fn is_skew(&self) -> bool {
        self.skew_defect().is_zero()
    }

    /// Fréchet derivative of the operator in the direction `dir`: replaces
    /// every coefficient by its Fréchet derivative with respect to `v`.
    /// Constant-coefficient operators map to the zero operator.
    pub fn op_frechet(&self, v: &str, dir: &JetExpr) -> LinDiffOp {
        let mut out = LinDiffOp::zero(self.dim());
        for (j, a) in &self.terms {
            out.add_term(*j, a.frechet_apply(v, dir));
        }
        out
    }

    /// Names of dependent variables occurring in any coefficient.
    pub fn dependent_vars(&self) -> std::collections::BTreeSet<String> {
        let mut out = std::collections::BTreeSet::new();
        for a in self.terms.values() {
            out.extend(a.dependent_vars());
        }
        out
    }
}

impl Add for &LinDiffOp {
    type Output = LinDiffOp;
    fn add(self, rhs: &LinDiffOp) -> LinDiffOp {
        assert_eq!(self.dim, rhs.dim, "operator dimension mismatch");
        let mut out = self.clone();
        for (j, a) in &rhs.terms {
            out.add_term(*j, a.clone());
        }
        out
    }
}

impl Sub for &LinDiffOp {
    type Output = LinDiffOp;
    fn sub(self, rhs: &LinDiffOp) -> LinDiffOp {
        self + &(-rhs)
    }
}

impl Neg for &LinDiffOp {
    type Output = LinDiffOp;
    fn neg(self) -> LinDiffOp {
        let mut out = LinDiffOp::zero(self.dim());
        for (j, a) in &self.terms {
            out.add_term(*j, -a);
        }
        out
    }
}

impl Neg for LinDiffOp {
    type Output = LinDiffOp;
    fn neg(self) -> LinDiffOp {
        -&self
    }
}

fn write_derivative(f: &mut fmt::Formatter<'_>, j: &MultiIndex) -> fmt::Result {
    let mut first = true;
    for (axis, label) in ["x", "y"].iter().enumerate().take(j.dim()) {
        let e = j.get(axis);
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "D_{}", label)?;
        if e > 1 {
            write!(f, "^{}", e)?;
        }
    }
    Ok(())
}

impl fmt::Display for LinDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (j, a)) in self.terms.iter().enumerate() {
            // pull a leading sign out of single-term coefficients
            let (body, negative) = match a.terms().next() {
                Some((_, c)) if a.num_terms() == 1 && c.is_negative() => ((-a).to_string(), true),
                _ => (a.to_string(), false),
            };
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let needs_parens = a.num_terms() > 1;
            let is_one = body == "1";
            if j.order() == 0 {
                if needs_parens {
                    write!(f, "({})*Id", body)?;
                } else {
                    write!(f, "{}*Id", body)?;
                }
            } else {
                if needs_parens {
                    write!(f, "({})*", body)?;
                } else if !is_one {
                    write!(f, "{}*", body)?;
                }
                write_derivative(f, j)?;
            }
        }
        Ok(())
    }
}
