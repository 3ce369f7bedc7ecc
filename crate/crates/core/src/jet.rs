//! Truncated multivariate polynomials ("jets") over exact rationals.
//!
//! A [`Jet`] in `m` variables of order `D` keeps every monomial of total
//! degree at most `D`; products drop anything above. The order doubles as
//! the jet's *trustworthy* order: [`Jet::partial`] lowers it by one because
//! an order-`D` jet only determines its derivative through degree `D - 1`.
//! Binary operations require both operands to have the same shape; callers
//! mixing orders must [`Jet::truncate`] explicitly.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use smallvec::SmallVec;
use thiserror::Error;

use crate::rational::{self, Rational};

/// Exponent multi-index `(α_1, ..., α_m)`.
pub type Exponents = SmallVec<[u16; 8]>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JetError {
    #[error(
        "jet shape mismatch: {left_vars} variables at order {left_order} vs \
         {right_vars} variables at order {right_order}"
    )]
    ShapeMismatch {
        left_vars: usize,
        left_order: u32,
        right_vars: usize,
        right_order: u32,
    },
    #[error("exponent vector {exps:?} does not fit {nvars} variables at order {order}")]
    BadExponents {
        exps: Vec<u16>,
        nvars: usize,
        order: u32,
    },
    #[error("duplicate monomial {0:?}")]
    DuplicateMonomial(Vec<u16>),
    #[error("point has {got} coordinates, jet has {nvars} variables")]
    PointDimension { got: usize, nvars: usize },
}

pub fn total_degree(exps: &[u16]) -> u32 {
    exps.iter().map(|&e| u32::from(e)).sum()
}

#[derive(Clone, PartialEq, Eq)]
pub struct Jet {
    nvars: usize,
    order: u32,
    terms: BTreeMap<Exponents, Rational>,
}

/// Evaluation point for jets; one rational coordinate per variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetPoint(pub Vec<Rational>);

impl JetPoint {
    pub fn origin(m: usize) -> Self {
        JetPoint(vec![rational::zero(); m])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl Jet {
    pub fn zero(nvars: usize, order: u32) -> Self {
        Jet {
            nvars,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, order: u32, c: Rational) -> Self {
        let mut jet = Jet::zero(nvars, order);
        if !c.is_zero() {
            jet.terms.insert(SmallVec::from_elem(0, nvars), c);
        }
        jet
    }

    /// The coordinate function `z_k` (0-based `k`).
    pub fn variable(nvars: usize, order: u32, k: usize) -> Self {
        assert!(k < nvars, "variable {k} out of range for {nvars} variables");
        let mut exps: Exponents = SmallVec::from_elem(0, nvars);
        exps[k] = 1;
        let mut jet = Jet::zero(nvars, order);
        if order >= 1 {
            jet.terms.insert(exps, rational::one());
        }
        jet
    }

    /// Builds a jet from `(exponents, coefficient)` pairs. Zero coefficients
    /// are dropped; monomials above `order` and repeated monomials are
    /// rejected.
    pub fn from_terms<I>(nvars: usize, order: u32, terms: I) -> Result<Self, JetError>
    where
        I: IntoIterator<Item = (Vec<u16>, Rational)>,
    {
        let mut jet = Jet::zero(nvars, order);
        for (exps, c) in terms {
            if exps.len() != nvars || total_degree(&exps) > order {
                return Err(JetError::BadExponents { exps, nvars, order });
            }
            let key: Exponents = SmallVec::from_vec(exps);
            if jet.terms.contains_key(&key) {
                return Err(JetError::DuplicateMonomial(key.to_vec()));
            }
            if !c.is_zero() {
                jet.terms.insert(key, c);
            }
        }
        Ok(jet)
    }

    /// Single monomial `c · z^exps`; silently zero if above the order.
    pub fn monomial(nvars: usize, order: u32, exps: &[u16], c: Rational) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut jet = Jet::zero(nvars, order);
        if total_degree(exps) <= order && !c.is_zero() {
            jet.terms.insert(SmallVec::from_slice(exps), c);
        }
        jet
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u16]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&SmallVec::<[u16; 8]>::from_elem(0, self.nvars))
            .cloned()
            .unwrap_or_else(rational::zero)
    }

    fn same_shape(&self, other: &Jet) -> Result<(), JetError> {
        if self.nvars == other.nvars && self.order == other.order {
            Ok(())
        } else {
            Err(JetError::ShapeMismatch {
                left_vars: self.nvars,
                left_order: self.order,
                right_vars: other.nvars,
                right_order: other.order,
            })
        }
    }

    pub fn checked_add(&self, other: &Jet) -> Result<Jet, JetError> {
        self.same_shape(other)?;
        let mut out = self.clone();
        out.accumulate(other, None);
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Jet) -> Result<Jet, JetError> {
        self.same_shape(other)?;
        let mut out = self.clone();
        out.accumulate(other, Some(&-rational::one()));
        Ok(out)
    }

    /// Truncated product: monomials of total degree above the order vanish.
    pub fn checked_mul(&self, other: &Jet) -> Result<Jet, JetError> {
        self.same_shape(other)?;
        let mut out = Jet::zero(self.nvars, self.order);
        out.add_product(self, other);
        Ok(out)
    }

    /// `self += factor · other` (factor 1 when `None`); shapes are assumed
    /// to match.
    fn accumulate(&mut self, other: &Jet, factor: Option<&Rational>) {
        for (e, c) in &other.terms {
            let term = match factor {
                Some(f) => c * f,
                None => c.clone(),
            };
            add_term(&mut self.terms, e.clone(), term);
        }
    }

    /// `self += a · b`, truncated at `self`'s order.
    pub fn add_product(&mut self, a: &Jet, b: &Jet) {
        debug_assert!(a.nvars == self.nvars && b.nvars == self.nvars);
        let limit = self.order;
        let b_terms: Vec<(u32, &Exponents, &Rational)> = b
            .terms
            .iter()
            .map(|(e, c)| (total_degree(e), e, c))
            .collect();
        for (ea, ca) in &a.terms {
            let da = total_degree(ea);
            if da > limit {
                continue;
            }
            for &(db, eb, cb) in &b_terms {
                if da + db > limit {
                    continue;
                }
                let e: Exponents = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                add_term(&mut self.terms, e, ca * cb);
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Jet {
        if c.is_zero() {
            return Jet::zero(self.nvars, self.order);
        }
        Jet {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Formal partial derivative in variable `k` (0-based). The result is
    /// only determined through degree `order - 1`, which becomes its order.
    ///
    /// Panics on an order-0 jet, whose derivative carries no information.
    pub fn partial(&self, k: usize) -> Jet {
        assert!(k < self.nvars, "variable {k} out of range");
        assert!(self.order > 0, "derivative of an order-0 jet is undetermined");
        let order = self.order - 1;
        let mut out = Jet::zero(self.nvars, order);
        for (e, c) in &self.terms {
            let ek = e[k];
            if ek == 0 || total_degree(e) > order + 1 {
                continue;
            }
            let mut ne = e.clone();
            ne[k] -= 1;
            out.terms.insert(ne, c * rational::int(i64::from(ek)));
        }
        out
    }

    /// Indefinite integral `z_k ∫₀¹ a(.., t z_k, ..) dt`: each monomial with
    /// `z_k`-exponent `d` is multiplied by `z_k / (d + 1)`. Terms pushed past
    /// the order are dropped; the order itself is unchanged.
    pub fn antider(&self, k: usize) -> Jet {
        assert!(k < self.nvars, "variable {k} out of range");
        let mut out = Jet::zero(self.nvars, self.order);
        for (e, c) in &self.terms {
            if total_degree(e) + 1 > self.order {
                continue;
            }
            let mut ne = e.clone();
            ne[k] += 1;
            let d = i64::from(ne[k]);
            out.terms.insert(ne, c / rational::int(d));
        }
        out
    }

    pub fn eval(&self, p: &JetPoint) -> Result<Rational, JetError> {
        if p.dim() != self.nvars {
            return Err(JetError::PointDimension {
                got: p.dim(),
                nvars: self.nvars,
            });
        }
        let mut acc = rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in p.0.iter().zip(e.iter()) {
                for _ in 0..k {
                    term *= x;
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    pub fn homogeneous_part(&self, d: u32) -> Jet {
        Jet {
            nvars: self.nvars,
            order: self.order,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total_degree(e) == d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Lowest total degree carrying a nonzero coefficient; `None` stands for
    /// `+∞` (the zero jet).
    pub fn lowest_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| total_degree(e)).min()
    }

    /// Drops every monomial above `order` and lowers the recorded order.
    pub fn truncate(&self, order: u32) -> Jet {
        assert!(order <= self.order, "cannot raise a jet's order by truncation");
        Jet {
            nvars: self.nvars,
            order,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total_degree(e) <= order)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Same polynomial re-tagged at a higher order. Only meaningful when the
    /// caller knows the coefficients in the new degrees are exactly zero,
    /// e.g. for a homogeneous part below the old order.
    pub fn lift(&self, order: u32) -> Jet {
        assert!(order >= self.order, "lift cannot lower the order");
        Jet {
            nvars: self.nvars,
            order,
            terms: self.terms.clone(),
        }
    }

    /// First nonzero coefficient in (degree, exponent) order, restricted to
    /// degrees at most `through`.
    pub fn first_nonzero_through(&self, through: u32) -> Option<(Exponents, Rational)> {
        self.terms
            .iter()
            .filter(|(e, _)| total_degree(e) <= through)
            .min_by(|(a, _), (b, _)| (total_degree(a), *a).cmp(&(total_degree(b), *b)))
            .map(|(e, c)| (e.clone(), c.clone()))
    }

    pub fn first_nonzero(&self) -> Option<(Exponents, Rational)> {
        self.first_nonzero_through(self.order)
    }
}

fn add_term(terms: &mut BTreeMap<Exponents, Rational>, e: Exponents, c: Rational) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match terms.entry(e) {
        Entry::Vacant(slot) => {
            slot.insert(c);
        }
        Entry::Occupied(mut slot) => {
            *slot.get_mut() += c;
            if slot.get().is_zero() {
                slot.remove();
            }
        }
    }
}

impl Add for &Jet {
    type Output = Jet;

    fn add(self, rhs: &Jet) -> Jet {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &Jet {
    type Output = Jet;

    fn sub(self, rhs: &Jet) -> Jet {
        self.checked_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for &Jet {
    type Output = Jet;

    fn mul(self, rhs: &Jet) -> Jet {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &Jet {
    type Output = Jet;

    fn neg(self) -> Jet {
        self.scale(&-rational::one())
    }
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet[m={}, D={}]({})", self.nvars, self.order, self)
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut ordered: Vec<_> = self.terms.iter().collect();
        ordered.sort_by(|(a, _), (b, _)| (total_degree(a), *b).cmp(&(total_degree(b), *a)));
        for (n, (e, c)) in ordered.into_iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let monomial: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| {
                    if k == 1 {
                        format!("z{}", v + 1)
                    } else {
                        format!("z{}^{}", v + 1, k)
                    }
                })
                .collect();
            if monomial.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", monomial.join("*"))?;
            } else {
                write!(f, "{}*{}", c, monomial.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn z(k: usize) -> Jet {
        Jet::variable(3, 4, k)
    }

    fn c(v: i64) -> Jet {
        Jet::constant(3, 4, int(v))
    }

    #[test]
    fn add_and_scale() {
        let s = &z(0) + &z(1);
        assert_eq!(s.coefficient(&[1, 0, 0]), int(1));
        assert_eq!(s.coefficient(&[0, 1, 0]), int(1));
        assert_eq!(&s + &Jet::zero(3, 4), s);
        assert_eq!(z(0).scale(&int(3)).scale(&frac(1, 3)), z(0));
    }

    #[test]
    fn products() {
        let p = &z(0) * &z(1);
        assert_eq!(p, Jet::monomial(3, 4, &[1, 1, 0], int(1)));
        let z1_4 = Jet::monomial(3, 4, &[4, 0, 0], int(1));
        assert!((&z1_4 * &z(0)).is_zero());
        let lhs = &(&c(1) + &z(0)) * &(&c(1) - &z(0));
        assert_eq!(lhs, &c(1) - &(&z(0) * &z(0)));
    }

    #[test]
    fn mismatched_shapes_are_errors() {
        let a = Jet::variable(3, 4, 0);
        let b = Jet::variable(3, 5, 0);
        let d = Jet::variable(2, 4, 0);
        assert!(matches!(a.checked_add(&b), Err(JetError::ShapeMismatch { .. })));
        assert!(a.checked_mul(&d).is_err());
    }

    #[test]
    fn derivative_examples() {
        let z1sq = &z(0) * &z(0);
        assert_eq!(z1sq.partial(0), Jet::variable(3, 3, 0).scale(&int(2)));
        assert!(z(0).partial(1).is_zero());
        assert_eq!(c(1).antider(0).partial(0), Jet::constant(3, 3, int(1)));
        assert_eq!(z(0).partial(0).order(), 3);
    }

    #[test]
    fn antiderivative_examples() {
        assert_eq!(c(1).antider(0), z(0));
        let z1z2 = &z(0) * &z(1);
        assert_eq!(z1z2.antider(1), Jet::monomial(3, 4, &[1, 2, 0], frac(1, 2)));
        let z2sq = &z(1) * &z(1);
        assert_eq!(z2sq.antider(0), Jet::monomial(3, 4, &[1, 2, 0], int(1)));
        // degree-4 input is pushed past the order
        let top = Jet::monomial(3, 4, &[0, 4, 0], int(1));
        assert!(top.antider(0).is_zero());
    }

    #[test]
    fn eval_grading_lowest_degree() {
        let z1sq = &z(0) * &z(0);
        let p = JetPoint(vec![int(3), int(0), int(0)]);
        assert_eq!(z1sq.eval(&p).unwrap(), int(9));
        assert_eq!((&c(1) + &z(0)).homogeneous_part(0), c(1));
        assert_eq!((&z(0) * &z(1)).lowest_degree(), Some(2));
        assert_eq!(Jet::zero(3, 4).lowest_degree(), None);
        assert!(z1sq.eval(&JetPoint(vec![int(1)])).is_err());
    }

    #[test]
    fn from_terms_validation() {
        assert!(Jet::from_terms(2, 2, vec![(vec![3, 0], int(1))]).is_err());
        assert!(Jet::from_terms(2, 2, vec![(vec![1], int(1))]).is_err());
        let dup = vec![(vec![1, 0], int(1)), (vec![1, 0], int(2))];
        assert!(matches!(
            Jet::from_terms(2, 2, dup),
            Err(JetError::DuplicateMonomial(_))
        ));
        let j = Jet::from_terms(2, 2, vec![(vec![1, 0], int(0))]).unwrap();
        assert!(j.is_zero());
    }

    #[test]
    fn first_nonzero_prefers_low_degree() {
        let j = &Jet::monomial(3, 4, &[2, 0, 0], int(5)) + &z(2);
        let (e, v) = j.first_nonzero().unwrap();
        assert_eq!(e.as_slice(), &[0, 0, 1]);
        assert_eq!(v, int(1));
        assert!(j.first_nonzero_through(0).is_none());
    }

    #[test]
    fn display_is_readable() {
        let j = &(&c(2) + &z(0)) + &Jet::monomial(3, 4, &[0, 2, 1], frac(-1, 2));
        assert_eq!(j.to_string(), "2 + z1 + -1/2*z2^2*z3");
    }
}
