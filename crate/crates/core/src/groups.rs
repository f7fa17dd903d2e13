//! Closed connected subgroups of `Uₙ` that arise as stability groups, their
//! Lie algebras, and the vector fields by which those algebras act on
//! polynomials in `z, z̄`.
//!
//! Invariance is tested infinitesimally: every group here is connected, so a
//! polynomial is invariant iff each Lie algebra generator annihilates it.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gaussian::Gaussian;
use crate::matrix::SparseEchelon;
use crate::poly::{Coefficient, Poly};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// `SO₃(ℝ)` in `U₃`.
    So3,
    /// `e^{iℝ}·SO₃(ℝ)` in `U₃`.
    CircleSo3,
    /// `U₁ × SU_{n−1}`, block diagonal.
    U1xSu,
    /// `H^n_{k₁,k₂}`: `diag(a, A)` with `A ∈ U_{n−1}`, `a = (det A)^{k₁/k₂}`.
    H { k1: i64, k2: i64 },
    /// Diagonal torus of `U₃`.
    U1Cubed,
    /// `U₂ × U₂` block diagonal in `U₄`.
    U2xU2,
    /// `SU_{n−1}` acting on `z₂..zₙ`.
    SuBlock,
    /// All of `Uₙ`.
    FullUn,
    /// `U₁ × U_{n−1}`.
    U1xU,
}

/// Which dimension class a group belongs to, relative to its ambient `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DimensionClass {
    /// `n²`
    Full,
    /// `n² − 2n + 2`
    MinusTwoNPlusTwo,
    /// `n² − 2n + 1`
    MinusTwoNPlusOne,
    /// `n² − 2n`
    MinusTwoN,
}

impl DimensionClass {
    pub fn eval(self, n: usize) -> usize {
        let n2 = n * n;
        match self {
            DimensionClass::Full => n2,
            DimensionClass::MinusTwoNPlusTwo => n2 + 2 - 2 * n,
            DimensionClass::MinusTwoNPlusOne => n2 + 1 - 2 * n,
            DimensionClass::MinusTwoN => n2 - 2 * n,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    kind: GroupKind,
    n: usize,
}

impl GroupSpec {
    pub fn new(kind: GroupKind, n: usize) -> Result<Self> {
        let bad = |msg: &str| Err(Error::InvalidGroup(format!("{kind:?} at n = {n}: {msg}")));
        match kind {
            GroupKind::So3 | GroupKind::CircleSo3 | GroupKind::U1Cubed if n != 3 => bad("requires n = 3"),
            GroupKind::U2xU2 if n != 4 => bad("requires n = 4"),
            GroupKind::U1xSu | GroupKind::SuBlock if n < 3 => bad("requires n ≥ 3"),
            GroupKind::U1xU if n < 2 => bad("requires n ≥ 2"),
            GroupKind::FullUn if n < 1 => bad("requires n ≥ 1"),
            GroupKind::H { .. } if n < 2 => bad("requires n ≥ 2"),
            GroupKind::H { k2, .. } if k2 <= 0 => bad("requires k2 > 0"),
            GroupKind::H { k1, k2 } if k1.gcd(&k2) != 1 => bad("requires gcd(k1, k2) = 1"),
            _ => Ok(GroupSpec { kind, n }),
        }
    }

    pub fn so3() -> Self {
        GroupSpec { kind: GroupKind::So3, n: 3 }
    }

    pub fn circle_so3() -> Self {
        GroupSpec { kind: GroupKind::CircleSo3, n: 3 }
    }

    pub fn u1_cubed() -> Self {
        GroupSpec { kind: GroupKind::U1Cubed, n: 3 }
    }

    pub fn u2xu2() -> Self {
        GroupSpec { kind: GroupKind::U2xU2, n: 4 }
    }

    pub fn u1xsu(n: usize) -> Result<Self> {
        Self::new(GroupKind::U1xSu, n)
    }

    pub fn h(k1: i64, k2: i64, n: usize) -> Result<Self> {
        Self::new(GroupKind::H { k1, k2 }, n)
    }

    pub fn su_block(n: usize) -> Result<Self> {
        Self::new(GroupKind::SuBlock, n)
    }

    pub fn full(n: usize) -> Result<Self> {
        Self::new(GroupKind::FullUn, n)
    }

    pub fn u1xu(n: usize) -> Result<Self> {
        Self::new(GroupKind::U1xU, n)
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dimension_class(&self) -> DimensionClass {
        match self.kind {
            GroupKind::CircleSo3 | GroupKind::U1xSu | GroupKind::H { .. } => DimensionClass::MinusTwoNPlusOne,
            GroupKind::So3 | GroupKind::U1Cubed | GroupKind::U2xU2 | GroupKind::SuBlock => DimensionClass::MinusTwoN,
            GroupKind::FullUn => DimensionClass::Full,
            GroupKind::U1xU => DimensionClass::MinusTwoNPlusTwo,
        }
    }

    /// The dimension the classification assigns to this group.
    pub fn expected_dim(&self) -> usize {
        self.dimension_class().eval(self.n)
    }

    /// A basis of the Lie algebra as anti-Hermitian matrices with
    /// Gaussian-integer entries.
    pub fn lie_basis<T: Scalar>(&self) -> Vec<LieElement<T>> {
        let n = self.n;
        let mut basis = Vec::new();
        match self.kind {
            GroupKind::So3 | GroupKind::CircleSo3 => {
                for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                    basis.push(LieElement::rotation(n, a, b));
                }
                if self.kind == GroupKind::CircleSo3 {
                    let mut center = LieElement::zero(n);
                    for a in 0..n {
                        center.set(a, a, Gaussian::i());
                    }
                    basis.push(center);
                }
            }
            GroupKind::U1xSu => {
                basis.push(LieElement::imag_diag(n, 0));
                push_su_block(&mut basis, n, 1..n);
            }
            GroupKind::H { k1, k2 } => {
                push_off_diagonal(&mut basis, n, 1..n);
                // l(𝔄) = (k₁/k₂)·trace 𝔄, scaled by k₂
                for a in 1..n {
                    let mut e = LieElement::zero(n);
                    e.set(0, 0, Gaussian::from_ints(0, k1));
                    e.set(a, a, Gaussian::from_ints(0, k2));
                    basis.push(e);
                }
            }
            GroupKind::U1Cubed => {
                for a in 0..n {
                    basis.push(LieElement::imag_diag(n, a));
                }
            }
            GroupKind::U2xU2 => {
                push_u_block(&mut basis, n, 0..2);
                push_u_block(&mut basis, n, 2..4);
            }
            GroupKind::SuBlock => push_su_block(&mut basis, n, 1..n),
            GroupKind::FullUn => push_u_block(&mut basis, n, 0..n),
            GroupKind::U1xU => {
                basis.push(LieElement::imag_diag(n, 0));
                push_u_block(&mut basis, n, 1..n);
            }
        }
        basis
    }

    pub fn group_dim(&self) -> usize {
        self.lie_basis::<crate::Rational64>().len()
    }
}

fn push_off_diagonal<T: Scalar>(basis: &mut Vec<LieElement<T>>, n: usize, range: std::ops::Range<usize>) {
    for a in range.clone() {
        for b in a + 1..range.end {
            basis.push(LieElement::rotation(n, a, b));
            basis.push(LieElement::imag_sym(n, a, b));
        }
    }
}

fn push_u_block<T: Scalar>(basis: &mut Vec<LieElement<T>>, n: usize, range: std::ops::Range<usize>) {
    push_off_diagonal(basis, n, range.clone());
    for a in range {
        basis.push(LieElement::imag_diag(n, a));
    }
}

fn push_su_block<T: Scalar>(basis: &mut Vec<LieElement<T>>, n: usize, range: std::ops::Range<usize>) {
    push_off_diagonal(basis, n, range.clone());
    for a in range.start..range.end.saturating_sub(1) {
        let mut e = LieElement::zero(n);
        e.set(a, a, Gaussian::i());
        e.set(a + 1, a + 1, -Gaussian::<T>::i());
        basis.push(e);
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GroupKind::So3 => write!(f, "so3"),
            GroupKind::CircleSo3 => write!(f, "circle-so3"),
            GroupKind::U1xSu => write!(f, "u1xsu:{}", self.n),
            GroupKind::H { k1, k2 } => write!(f, "h:{k1},{k2}:{}", self.n),
            GroupKind::U1Cubed => write!(f, "u1cubed"),
            GroupKind::U2xU2 => write!(f, "u2xu2"),
            GroupKind::SuBlock => write!(f, "su:{}", self.n),
            GroupKind::FullUn => write!(f, "un:{}", self.n),
            GroupKind::U1xU => write!(f, "u1xu:{}", self.n),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidGroup(format!("cannot parse group specifier {s:?}"));
        let int = |t: &str| t.trim().parse::<i64>().map_err(|_| bad());
        let dim = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        let parts: Vec<&str> = s.trim().split(':').collect();
        match parts.as_slice() {
            ["so3"] => Ok(Self::so3()),
            ["circle-so3"] => Ok(Self::circle_so3()),
            ["u1cubed"] => Ok(Self::u1_cubed()),
            ["u2xu2"] => Ok(Self::u2xu2()),
            ["u1xsu", n] => Self::u1xsu(dim(n)?),
            ["su", n] => Self::su_block(dim(n)?),
            ["un", n] => Self::full(dim(n)?),
            ["u1xu", n] => Self::u1xu(dim(n)?),
            ["h", ks, n] => {
                let (k1, k2) = ks.split_once(',').ok_or_else(bad)?;
                Self::h(int(k1)?, int(k2)?, dim(n)?)
            }
            _ => Err(bad()),
        }
    }
}

/// An `n×n` matrix in the Lie algebra of `Uₙ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieElement<T> {
    n: usize,
    entries: Vec<Gaussian<T>>,
}

impl<T: Scalar> LieElement<T> {
    pub fn zero(n: usize) -> Self {
        LieElement { n, entries: vec![Gaussian::zero(); n * n] }
    }

    /// From rows. Does not check anti-Hermitian-ness; see [`Self::is_anti_hermitian`].
    pub fn from_rows(rows: Vec<Vec<Gaussian<T>>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        LieElement { n, entries: rows.into_iter().flatten().collect() }
    }

    /// `E_ab − E_ba`.
    pub fn rotation(n: usize, a: usize, b: usize) -> Self {
        let mut e = Self::zero(n);
        e.set(a, b, Gaussian::one());
        e.set(b, a, -Gaussian::<T>::one());
        e
    }

    /// `i(E_ab + E_ba)`.
    pub fn imag_sym(n: usize, a: usize, b: usize) -> Self {
        let mut e = Self::zero(n);
        e.set(a, b, Gaussian::i());
        e.set(b, a, Gaussian::i());
        e
    }

    /// `i·E_aa`.
    pub fn imag_diag(n: usize, a: usize) -> Self {
        let mut e = Self::zero(n);
        e.set(a, a, Gaussian::i());
        e
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> &Gaussian<T> {
        &self.entries[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Gaussian<T>) {
        self.entries[r * self.n + c] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Gaussian<T>>> {
        self.entries.chunks(self.n).map(<[_]>::to_vec).collect()
    }

    pub fn is_anti_hermitian(&self) -> bool {
        (0..self.n).all(|r| (0..self.n).all(|c| self.get(c, r).conj() == -self.get(r, c)))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zero(n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = Gaussian::zero();
                for k in 0..n {
                    let (a, b) = (self.get(r, k), other.get(k, c));
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                out.set(r, c, acc);
            }
        }
        out
    }

    /// `[A, B] = AB − BA`.
    pub fn bracket(&self, other: &Self) -> Self {
        let ab = self.matmul(other);
        let ba = other.matmul(self);
        LieElement { n: self.n, entries: ab.entries.iter().zip(&ba.entries).map(|(x, y)| x - y).collect() }
    }

    /// Coordinates over ℝ: real parts then imaginary parts, length `2n²`.
    /// Lie algebras are real vector spaces, so spans must be taken here.
    pub fn real_coordinates(&self) -> Vec<T> {
        self.entries.iter().map(|e| e.re.clone()).chain(self.entries.iter().map(|e| e.im.clone())).collect()
    }
}

fn real_row<T: Scalar>(e: &LieElement<T>) -> impl Iterator<Item = (usize, Gaussian<T>)> {
    e.real_coordinates().into_iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(c, v)| (c, Gaussian::real(v)))
}

/// Rank of a family of Lie elements over ℝ.
pub fn real_rank<T: Scalar>(elements: &[LieElement<T>]) -> usize {
    let Some(first) = elements.first() else { return 0 };
    let mut ech = SparseEchelon::new(2 * first.n * first.n);
    for e in elements {
        ech.insert(real_row(e));
    }
    ech.rank()
}

/// `X_A P = Σ_α (Az)_α ∂P/∂z_α + Σ_α (Āz̄)_α ∂P/∂z̄_α`, the derivative at
/// `t = 0` of `P(e^{tA}z)`. Preserves bidegree and the power of `u`.
pub fn infinitesimal_action<T: Scalar>(a: &LieElement<T>, p: &Poly<T>) -> Result<Poly<T>> {
    let n = p.n();
    if a.n() != n {
        return Err(Error::DimensionMismatch(a.n(), n));
    }
    let mut out = Poly::zero(n);
    for (m, c) in p.terms() {
        for alpha in 0..n {
            let ez = m.z[alpha];
            let ezb = m.zb[alpha];
            for beta in 0..n {
                let entry = a.get(alpha, beta);
                if entry.is_zero() {
                    continue;
                }
                if ez > 0 {
                    let mut dm = m.clone();
                    dm.z[alpha] -= 1;
                    dm.z[beta] += 1;
                    let s = entry * &Gaussian::from_int(ez as i64);
                    out.add_term(dm, c.scale(&s));
                }
                if ezb > 0 {
                    let mut dm = m.clone();
                    dm.zb[alpha] -= 1;
                    dm.zb[beta] += 1;
                    let s = &entry.conj() * &Gaussian::from_int(ezb as i64);
                    out.add_term(dm, c.scale(&s));
                }
            }
        }
    }
    Ok(out)
}

/// Indices of the basis elements that do not annihilate `p`.
pub fn non_annihilating<T: Scalar>(p: &Poly<T>, g: &GroupSpec) -> Result<Vec<usize>> {
    if p.n() != g.n() {
        return Err(Error::DimensionMismatch(p.n(), g.n()));
    }
    let mut failing = Vec::new();
    for (idx, a) in g.lie_basis::<T>().iter().enumerate() {
        if !infinitesimal_action(a, p)?.is_zero() {
            failing.push(idx);
        }
    }
    Ok(failing)
}

pub fn is_invariant<T: Scalar>(p: &Poly<T>, g: &GroupSpec) -> Result<bool> {
    Ok(non_annihilating(p, g)?.is_empty())
}

/// Whether every commutator of basis elements lies in the real span of the basis.
pub fn bracket_closure_check<T: Scalar>(g: &GroupSpec) -> bool {
    let basis = g.lie_basis::<T>();
    if basis.is_empty() {
        return true;
    }
    let n = g.n();
    let mut ech = SparseEchelon::new(2 * n * n);
    for e in &basis {
        ech.insert(real_row(e));
    }
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i + 1..] {
            if !ech.contains(real_row(&a.bracket(b))) {
                return false;
            }
        }
    }
    true
}

/// Applies the action to a single coefficient-one monomial, for building
/// invariance matrices column by column.
pub(crate) fn action_on_monomial<T: Scalar>(
    a: &LieElement<T>,
    m: &crate::poly::Monomial,
) -> Poly<T> {
    let p = Poly::term(m.n(), m.clone(), Coefficient::scalar(Gaussian::one()));
    infinitesimal_action(a, &p).expect("dimensions agree by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{GaussianRational as G, Polynomial as P, Rational};

    #[test]
    fn spec_grammar_round_trip() {
        for s in ["so3", "circle-so3", "u1xsu:4", "h:-1,2:3", "u1cubed", "u2xu2", "su:5", "un:2", "u1xu:3"] {
            let g: GroupSpec = s.parse().unwrap();
            assert_eq!(g.to_string(), s);
        }
        assert!("h:2,4:3".parse::<GroupSpec>().is_err());
        assert!("h:1,-2:3".parse::<GroupSpec>().is_err());
        assert!("su:2".parse::<GroupSpec>().is_err());
        assert!("so4".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn basis_examples() {
        let so3 = GroupSpec::so3().lie_basis::<Rational>();
        assert_eq!(so3.len(), 3);
        assert!(so3.iter().all(|e| e.entries.iter().all(|x| x.is_real())));
        assert_eq!(GroupSpec::h(1, 2, 3).unwrap().group_dim(), 4);
        let torus = GroupSpec::u1_cubed().lie_basis::<Rational>();
        assert_eq!(torus, (0..3).map(|a| LieElement::imag_diag(3, a)).collect::<Vec<_>>());
    }

    #[test]
    fn dims() {
        assert_eq!(GroupSpec::circle_so3().group_dim(), 4);
        assert_eq!(GroupSpec::u2xu2().group_dim(), 8);
        assert_eq!(GroupSpec::su_block(4).unwrap().group_dim(), 8);
    }

    #[test]
    fn actions() {
        let mut iid = LieElement::<Rational>::zero(2);
        iid.set(0, 0, G::i());
        iid.set(1, 1, G::i());
        let z1 = P::var(2, crate::Var::Z(0)).unwrap();
        let zb1 = P::var(2, crate::Var::Zb(0)).unwrap();
        assert!(infinitesimal_action(&iid, &(&z1 * &zb1)).unwrap().is_zero());
        let z1sq = &z1 * &z1;
        assert_eq!(infinitesimal_action(&iid, &z1sq).unwrap(), z1sq.scale(&G::from_ints(0, 2)));

        let rot = LieElement::<Rational>::rotation(2, 0, 1);
        assert!(infinitesimal_action(&rot, &P::z_dot_z(2)).unwrap().is_zero());
        assert_eq!(
            infinitesimal_action(&rot, &P::z_dot_z(3)),
            Err(Error::DimensionMismatch(2, 3))
        );
    }

    #[test]
    fn invariance_examples() {
        for g in ["so3", "circle-so3", "u1cubed", "u1xsu:3", "h:1,2:3", "su:3", "un:3", "u1xu:3"] {
            let g: GroupSpec = g.parse().unwrap();
            assert!(is_invariant(&P::norm_sq(3), &g).unwrap(), "{g}");
        }
        assert!(is_invariant(&P::z_dot_z(3), &GroupSpec::so3()).unwrap());
        assert!(!is_invariant(&P::z_dot_z(3), &GroupSpec::circle_so3()).unwrap());
    }

    #[test]
    fn closure() {
        assert!(bracket_closure_check::<Rational>(&GroupSpec::so3()));
        assert!(bracket_closure_check::<Rational>(&GroupSpec::h(1, 2, 2).unwrap()));
        assert!(bracket_closure_check::<Rational>(&GroupSpec::u1xsu(3).unwrap()));
    }

    #[test]
    fn non_closed_span_detected() {
        // two rotations of so3 without the third do not close
        let basis = vec![LieElement::<Rational>::rotation(3, 0, 1), LieElement::rotation(3, 1, 2)];
        let c = basis[0].bracket(&basis[1]);
        let mut ech = SparseEchelon::new(18);
        for e in &basis {
            ech.insert(real_row(e));
        }
        assert!(!ech.contains(real_row(&c)));
    }
}
