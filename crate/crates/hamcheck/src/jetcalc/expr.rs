//! Differential polynomials in jet variables with exact rational coefficients.
//!
//! A [`JetExpr`] is a finite linear combination of monomials, each monomial a
//! multiset of jet variables `u`, `u_x`, `u_xy`, ... over one or two
//! independent variables. Coefficients are arbitrary-precision rationals, so
//! equality is decidable and syntactic on the canonical form.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact coefficient type used throughout the symbolic layer.
pub type Coeff = BigRational;

/// Maximum number of independent variables.
pub const MAX_DIM: usize = 2;

/// Convenience constructor for an exact rational `n/d`.
pub fn rat(n: i64, d: i64) -> Coeff {
    assert!(d != 0, "zero denominator");
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Binomial coefficient over machine integers, exact in `BigInt`.
fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k.min(n - k) {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// A differentiation multi-index over 1 or 2 independent variables.
///
/// The order is the sum of the per-axis entries; order 0 denotes the
/// undifferentiated variable. The ordering is graded lexicographic, which
/// fixes the canonical form of every expression.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex {
    dim: u8,
    orders: [u32; MAX_DIM],
}

impl MultiIndex {
    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1 && dim <= MAX_DIM, "dimension must be 1 or 2");
        MultiIndex {
            dim: dim as u8,
            orders: [0; MAX_DIM],
        }
    }

    /// One-dimensional index `d^j/dx^j`.
    pub fn d1(j: u32) -> Self {
        MultiIndex {
            dim: 1,
            orders: [j, 0],
        }
    }

    /// Two-dimensional index `d^(jx+jy)/dx^jx dy^jy`.
    pub fn d2(jx: u32, jy: u32) -> Self {
        MultiIndex {
            dim: 2,
            orders: [jx, jy],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    /// Total differentiation order `|J|`.
    pub fn order(&self) -> u32 {
        self.orders.iter().sum()
    }

    pub fn get(&self, axis: usize) -> u32 {
        assert!(axis < self.dim(), "axis {} out of range", axis);
        self.orders[axis]
    }

    /// Index with the entry on `axis` raised by one.
    pub fn raised(&self, axis: usize) -> Self {
        assert!(axis < self.dim(), "axis {} out of range", axis);
        let mut out = *self;
        out.orders[axis] += 1;
        out
    }

    /// Componentwise containment `other <= self`.
    pub fn contains(&self, other: &Self) -> bool {
        assert_eq!(self.dim, other.dim);
        (0..self.dim()).all(|i| self.orders[i] >= other.orders[i])
    }

    /// Componentwise difference; requires `self.contains(other)`.
    pub fn minus(&self, other: &Self) -> Self {
        assert!(self.contains(other), "multi-index subtraction underflow");
        let mut out = *self;
        for i in 0..self.dim() {
            out.orders[i] -= other.orders[i];
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = *self;
        for i in 0..self.dim() {
            out.orders[i] += other.orders[i];
        }
        out
    }

    /// Componentwise multi-index binomial coefficient `C(self, lower)`.
    pub fn binomial(&self, lower: &Self) -> BigInt {
        assert_eq!(self.dim, lower.dim);
        let mut acc = BigInt::one();
        for i in 0..self.dim() {
            acc *= binomial(self.orders[i], lower.orders[i]);
        }
        acc
    }

    /// All indices `I` with `I <= self` componentwise, in graded-lex order.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        match self.dim() {
            1 => {
                for a in 0..=self.orders[0] {
                    out.push(MultiIndex::d1(a));
                }
            }
            _ => {
                for a in 0..=self.orders[0] {
                    for b in 0..=self.orders[1] {
                        out.push(MultiIndex::d2(a, b));
                    }
                }
                out.sort();
            }
        }
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.dim
            .cmp(&other.dim)
            .then_with(|| self.order().cmp(&other.order()))
            .then_with(|| self.orders.cmp(&other.orders))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A single jet coordinate: a dependent-variable name together with a
/// differentiation multi-index.
///
/// Auxiliary variables (`xi`, `theta`, `w`, ...) are ordinary dependent
/// variables for all algebraic purposes.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct JetVar {
    pub name: String,
    pub index: MultiIndex,
}

impl JetVar {
    pub fn new(name: impl Into<String>, index: MultiIndex) -> Self {
        JetVar {
            name: name.into(),
            index,
        }
    }

    /// The undifferentiated variable.
    pub fn base(name: impl Into<String>, dim: usize) -> Self {
        JetVar::new(name, MultiIndex::zero(dim))
    }

    pub fn dim(&self) -> usize {
        self.index.dim()
    }
}

impl fmt::Display for JetVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if self.index.order() > 0 {
            write!(f, "_")?;
            for _ in 0..self.index.get(0) {
                write!(f, "x")?;
            }
            if self.index.dim() == 2 {
                for _ in 0..self.index.get(1) {
                    write!(f, "y")?;
                }
            }
        }
        Ok(())
    }
}

/// A multiset of jet variables, stored as sorted `(variable, exponent)` pairs.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    factors: Vec<(JetVar, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial {
            factors: Vec::new(),
        }
    }

    pub fn var(v: JetVar) -> Self {
        Monomial {
            factors: vec![(v, 1)],
        }
    }

    pub fn from_factors(mut factors: Vec<(JetVar, u32)>) -> Self {
        factors.retain(|(_, e)| *e > 0);
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(JetVar, u32)> = Vec::with_capacity(factors.len());
        for (v, e) in factors {
            match merged.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => merged.push((v, e)),
            }
        }
        Monomial { factors: merged }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    pub fn factors(&self) -> &[(JetVar, u32)] {
        &self.factors
    }

    pub fn exponent_of(&self, v: &JetVar) -> u32 {
        self.factors
            .iter()
            .find(|(fv, _)| fv == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Monomial::from_factors(factors)
    }

    /// Monomial with the exponent of `v` lowered by one; `None` if absent.
    pub fn without_one(&self, v: &JetVar) -> Option<Monomial> {
        let pos = self.factors.iter().position(|(fv, _)| fv == v)?;
        let mut factors = self.factors.clone();
        if factors[pos].1 == 1 {
            factors.remove(pos);
        } else {
            factors[pos].1 -= 1;
        }
        Some(Monomial { factors })
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.factors.cmp(&other.factors))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for (i, (v, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{}", v)?;
            if *e > 1 {
                write!(f, "^{}", e)?;
            }
        }
        Ok(())
    }
}

/// An exact differential polynomial: finite map from monomials to rational
/// coefficients, canonical by construction (no zero coefficients, monomials
/// in graded-lex order).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JetExpr {
    dim: u8,
    terms: BTreeMap<Monomial, Coeff>,
}

impl JetExpr {
    pub fn zero(dim: usize) -> Self {
        assert!(dim >= 1 && dim <= MAX_DIM, "dimension must be 1 or 2");
        JetExpr {
            dim: dim as u8,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Coeff) -> Self {
        let mut e = JetExpr::zero(dim);
        if !c.is_zero() {
            e.terms.insert(Monomial::one(), c);
        }
        e
    }

    pub fn from_int(dim: usize, n: i64) -> Self {
        JetExpr::constant(dim, rat(n, 1))
    }

    pub fn one(dim: usize) -> Self {
        JetExpr::from_int(dim, 1)
    }

    /// The undifferentiated dependent variable `name`.
    pub fn var(name: impl Into<String>, dim: usize) -> Self {
        JetExpr::jet(JetVar::base(name, dim))
    }

    /// A single jet coordinate as an expression.
    pub fn jet(v: JetVar) -> Self {
        let dim = v.dim();
        let mut e = JetExpr::zero(dim);
        e.terms.insert(Monomial::var(v), Coeff::one());
        e
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Monomial, Coeff)>) -> Self {
        let mut e = JetExpr::zero(dim);
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of the empty monomial.
    pub fn constant_term(&self) -> Coeff {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(Coeff::zero)
    }

    /// Names of all dependent variables occurring, auxiliaries included.
    pub fn dependent_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            for (v, _) in m.factors() {
                out.insert(v.name.clone());
            }
        }
        out
    }

    /// All multi-indices `J` such that `v^(J)` occurs in the expression.
    pub fn jet_indices_of(&self, v: &str) -> BTreeSet<MultiIndex> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            for (jv, _) in m.factors() {
                if jv.name == v {
                    out.insert(jv.index);
                }
            }
        }
        out
    }

    /// Highest total derivative order of any occurrence of any variable.
    pub fn max_derivative_order(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(v, _)| v.index.order()))
            .max()
            .unwrap_or(0)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Coeff) -> JetExpr {
        if c.is_zero() {
            return JetExpr::zero(self.dim());
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, k)| (m.clone(), k * c))
            .collect::<BTreeMap<_, _>>();
        JetExpr {
            dim: self.dim,
            terms,
        }
    }

    pub fn pow(&self, n: u32) -> JetExpr {
        let mut acc = JetExpr::one(self.dim());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative with respect to one jet coordinate.
    pub fn partial(&self, v: &JetVar) -> JetExpr {
        let mut out = JetExpr::zero(self.dim());
        for (m, c) in &self.terms {
            let e = m.exponent_of(v);
            if e > 0 {
                let lowered = m.without_one(v).expect("exponent checked above");
                out.add_term(lowered, c * Coeff::from_integer(BigInt::from(e)));
            }
        }
        out
    }
}

impl Add for &JetExpr {
    type Output = JetExpr;
    fn add(self, rhs: &JetExpr) -> JetExpr {
        assert_eq!(self.dim, rhs.dim, "independent-variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &JetExpr {
    type Output = JetExpr;
    fn sub(self, rhs: &JetExpr) -> JetExpr {
        assert_eq!(self.dim, rhs.dim, "independent-variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &JetExpr {
    type Output = JetExpr;
    fn mul(self, rhs: &JetExpr) -> JetExpr {
        assert_eq!(self.dim, rhs.dim, "independent-variable count mismatch");
        let mut out = JetExpr::zero(self.dim());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &JetExpr {
    type Output = JetExpr;
    fn neg(self) -> JetExpr {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), -c.clone()))
            .collect();
        JetExpr {
            dim: self.dim,
            terms,
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for JetExpr {
            type Output = JetExpr;
            fn $method(self, rhs: JetExpr) -> JetExpr {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&JetExpr> for JetExpr {
            type Output = JetExpr;
            fn $method(self, rhs: &JetExpr) -> JetExpr {
                (&self).$method(rhs)
            }
        }
        impl $trait<JetExpr> for &JetExpr {
            type Output = JetExpr;
            fn $method(self, rhs: JetExpr) -> JetExpr {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for JetExpr {
    type Output = JetExpr;
    fn neg(self) -> JetExpr {
        -&self
    }
}

impl fmt::Display for JetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", mag, m)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u() -> JetExpr {
        JetExpr::var("u", 1)
    }

    fn u_j(j: u32) -> JetExpr {
        JetExpr::jet(JetVar::new("u", MultiIndex::d1(j)))
    }

    #[test]
    fn multi_index_graded_lex_order() {
        let a = MultiIndex::d2(0, 0);
        let b = MultiIndex::d2(1, 0);
        let c = MultiIndex::d2(0, 1);
        let d = MultiIndex::d2(2, 0);
        let e = MultiIndex::d2(1, 1);
        assert!(a < b && a < c);
        assert!(c < b); // same order: lex on entries
        assert!(b < d && e < d);
        assert!(c < d); // graded: order 1 before order 2
    }

    #[test]
    fn multi_index_binomial() {
        let k = MultiIndex::d2(3, 2);
        let j = MultiIndex::d2(1, 1);
        assert_eq!(k.binomial(&j), BigInt::from(6)); // C(3,1)*C(2,1)
        assert_eq!(MultiIndex::d1(4).binomial(&MultiIndex::d1(2)), BigInt::from(6));
    }

    #[test]
    fn canonical_form_drops_zero_coefficients() {
        let e = &u() - &u();
        assert!(e.is_zero());
        assert_eq!(e.num_terms(), 0);
    }

    #[test]
    fn ring_identities_small() {
        let a = &u() + &JetExpr::from_int(1, 2);
        let b = &u_j(1) * &u();
        let lhs = &a * &(&b + &u());
        let rhs = &(&a * &b) + &(&a * &u());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn display_is_canonical() {
        // u_xxx + u*u_x prints lower-degree terms first
        let e = &u_j(3) + &(&u() * &u_j(1));
        assert_eq!(e.to_string(), "u_xxx + u*u_x");
        let e2 = (&u() * &u_j(1)).scale(&rat(-3, 1));
        assert_eq!(e2.to_string(), "-3*u*u_x");
        assert_eq!(JetExpr::zero(1).to_string(), "0");
        assert_eq!(JetExpr::constant(1, rat(-1, 2)).to_string(), "-1/2");
    }

    #[test]
    fn partial_derivative_basic() {
        // d/du (u^3/6) = u^2/2
        let f = u().pow(3).scale(&rat(1, 6));
        let d = f.partial(&JetVar::base("u", 1));
        assert_eq!(d, u().pow(2).scale(&rat(1, 2)));
    }

    #[test]
    fn two_dim_display_subscripts() {
        let v = JetVar::new("w", MultiIndex::d2(2, 1));
        assert_eq!(v.to_string(), "w_xxy");
    }
}
