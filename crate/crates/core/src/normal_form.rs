//! Truncated Chern–Moser normal forms `v = |z|² + Σ_{k,l≥2} F_{kl̄}(z, z̄, u)`.
//!
//! A surface is stored by its body `Σ F_{kl̄}`. The normal-form identities
//!
//! ```text
//! tr F_{22̄} ≡ 0,   tr² F_{23̄} ≡ 0,   tr³ F_{33̄} ≡ 0
//! ```
//!
//! with `tr = Σ_α ∂²/∂z_α∂z̄_α` are checked per power of `u`, since `tr`
//! never touches `u`. Truncation is by weight, where `z` and `z̄` weigh 1
//! and `u` weighs 2.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gaussian::Gaussian;
use crate::groups::GroupSpec;
use crate::matrix::SparseEchelon;
use crate::poly::{collect_constraints, Coefficient, Constraint, Monomial, Poly};
use crate::scalar::Scalar;

/// `tr P = Σ_α ∂²P/∂z_α∂z̄_α`. Lowers bidegree by `(1, 1)`.
pub fn trace<T: Scalar>(p: &Poly<T>) -> Poly<T> {
    let mut out = Poly::zero(p.n());
    for (m, c) in p.terms() {
        for a in 0..m.n() {
            let (ez, ezb) = (m.z[a], m.zb[a]);
            if ez == 0 || ezb == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.z[a] -= 1;
            dm.zb[a] -= 1;
            out.add_term(dm, c.scale(&Gaussian::from_int((ez * ezb) as i64)));
        }
    }
    out
}

pub fn trace_pow<T: Scalar>(p: &Poly<T>, times: u32) -> Poly<T> {
    (0..times).fold(p.clone(), |acc, _| trace(&acc))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalFormSurface<T> {
    pub n: usize,
    pub max_weight: u32,
    pub body: Poly<T>,
}

impl<T: Scalar> NormalFormSurface<T> {
    pub fn new(n: usize, max_weight: u32, body: Poly<T>) -> Result<Self> {
        if body.n() != n {
            return Err(Error::DimensionMismatch(n, body.n()));
        }
        Ok(NormalFormSurface { n, max_weight, body })
    }

    /// Violations of the structural requirements on the body: every
    /// monomial of bidegree `(k, l)` with `k, l ≥ 2`, weights within the
    /// truncation, and a real right-hand side.
    pub fn structural_issues(&self) -> Vec<String> {
        let mut issues = Vec::new();
        for (m, _) in self.body.terms() {
            let (k, l) = m.bidegree();
            if k < 2 || l < 2 {
                issues.push(format!("monomial {m} has bidegree ({k},{l}); both degrees must be at least 2"));
            }
            if m.weight() > self.max_weight {
                issues.push(format!("monomial {m} has weight {} above the truncation {}", m.weight(), self.max_weight));
            }
        }
        if !reality_check(self) {
            issues.push("body is not real: conjugate(body) ≠ body".to_string());
        }
        issues
    }

    fn u_degrees(&self) -> Vec<u32> {
        let mut us = self.body.u_degrees();
        if !us.contains(&0) {
            us.insert(0, 0);
        }
        us
    }
}

/// `conjugate(body) = body`.
pub fn reality_check<T: Scalar>(s: &NormalFormSurface<T>) -> bool {
    s.body.is_real()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Identity {
    /// `tr F_{22̄}`
    Trace22,
    /// `tr² F_{23̄}`
    Trace23,
    /// `tr² F_{32̄}`, the conjugate of the previous one for real bodies.
    Trace32,
    /// `tr³ F_{33̄}`
    Trace33,
}

impl Identity {
    pub const ALL: [Identity; 4] = [Identity::Trace22, Identity::Trace23, Identity::Trace32, Identity::Trace33];

    pub fn bidegree(self) -> (u32, u32) {
        match self {
            Identity::Trace22 => (2, 2),
            Identity::Trace23 => (2, 3),
            Identity::Trace32 => (3, 2),
            Identity::Trace33 => (3, 3),
        }
    }

    pub fn trace_power(self) -> u32 {
        match self {
            Identity::Trace22 => 1,
            Identity::Trace23 | Identity::Trace32 => 2,
            Identity::Trace33 => 3,
        }
    }

    /// The residual this identity requires to vanish.
    pub fn residual<T: Scalar>(self, body: &Poly<T>) -> Poly<T> {
        let (k, l) = self.bidegree();
        trace_pow(&body.bigraded_component(k, l), self.trace_power())
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Identity::Trace22 => "tr F22",
            Identity::Trace23 => "tr^2 F23",
            Identity::Trace32 => "tr^2 F32",
            Identity::Trace33 => "tr^3 F33",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck<T> {
    pub identity: Identity,
    pub u_degree: u32,
    pub residual: Poly<T>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalFormReport<T> {
    pub checks: Vec<IdentityCheck<T>>,
    pub structural: Vec<String>,
    pub passed: bool,
}

impl<T: Scalar> NormalFormReport<T> {
    pub fn residual(&self, identity: Identity, u_degree: u32) -> Option<&Poly<T>> {
        self.checks.iter().find(|c| c.identity == identity && c.u_degree == u_degree).map(|c| &c.residual)
    }
}

/// Checks the three trace identities per power of `u` and the structural
/// invariants. Coefficients must be scalar.
pub fn check_normal_form<T: Scalar>(s: &NormalFormSurface<T>) -> Result<NormalFormReport<T>> {
    if s.body.has_unknowns() {
        return Err(Error::UnknownsPresent);
    }
    let mut checks = Vec::new();
    for t in s.u_degrees() {
        let slice = s.body.u_slice(t);
        for identity in Identity::ALL {
            let residual = identity.residual(&slice);
            let passed = residual.is_zero();
            checks.push(IdentityCheck { identity, u_degree: t, residual, passed });
        }
    }
    let structural = s.structural_issues();
    let passed = structural.is_empty() && checks.iter().all(|c| c.passed);
    Ok(NormalFormReport { checks, structural, passed })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledConstraint<T> {
    pub identity: Identity,
    pub u_degree: u32,
    pub constraint: Constraint<T>,
}

/// Linear equations `lhs = 0` in real unknowns with Gaussian coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSystem<T> {
    pub equations: Vec<LabeledConstraint<T>>,
}

/// Rank data for a constraint system, computed over ℝ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemSummary {
    pub unknowns: usize,
    pub rank: usize,
    pub consistent: bool,
    /// Dimension of the real solution set, `None` if inconsistent.
    pub solution_dimension: Option<usize>,
}

impl<T: Scalar> ConstraintSystem<T> {
    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn unknowns(&self) -> BTreeSet<String> {
        self.equations.iter().flat_map(|e| e.constraint.lhs.unknowns().map(str::to_string)).collect()
    }

    /// Whether some equation is a nonzero Gaussian multiple of `target`.
    pub fn contains_proportional(&self, target: &Coefficient<T>) -> bool {
        self.equations.iter().any(|e| proportional(&e.constraint.lhs, target))
    }

    /// Splits each equation into real and imaginary parts (unknowns are
    /// real) and eliminates.
    pub fn summary(&self) -> SystemSummary {
        self.summary_with_unknowns(&self.unknowns())
    }

    /// As [`Self::summary`], counting extra unknowns that appear in no equation.
    pub fn summary_with_unknowns(&self, all: &BTreeSet<String>) -> SystemSummary {
        let mut names: BTreeSet<String> = all.clone();
        names.extend(self.unknowns());
        let index: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let k = names.len();
        let mut lhs = SparseEchelon::new(k);
        let mut aug = SparseEchelon::new(k + 1);
        for eq in &self.equations {
            let c = &eq.constraint.lhs;
            for part in [Part::Re, Part::Im] {
                let mut row: Vec<(usize, Gaussian<T>)> = c
                    .terms
                    .iter()
                    .map(|(name, v)| (index[name.as_str()], Gaussian::real(part.of(v))))
                    .filter(|(_, v)| !v.is_zero())
                    .collect();
                lhs.insert(row.iter().cloned());
                let constant = part.of(&c.constant);
                if !constant.is_zero() {
                    row.push((k, Gaussian::real(constant)));
                }
                aug.insert(row);
            }
        }
        let consistent = lhs.rank() == aug.rank();
        SystemSummary {
            unknowns: k,
            rank: lhs.rank(),
            consistent,
            solution_dimension: consistent.then(|| k - lhs.rank()),
        }
    }
}

#[derive(Clone, Copy)]
enum Part {
    Re,
    Im,
}

impl Part {
    fn of<T: Scalar>(self, g: &Gaussian<T>) -> T {
        match self {
            Part::Re => g.re.clone(),
            Part::Im => g.im.clone(),
        }
    }
}

fn proportional<T: Scalar>(a: &Coefficient<T>, b: &Coefficient<T>) -> bool {
    if a.is_zero() || b.is_zero() {
        return a.is_zero() && b.is_zero();
    }
    if a.terms.keys().ne(b.terms.keys()) {
        return false;
    }
    let ratio = match a.terms.iter().next() {
        Some((name, v)) => v / &b.terms[name],
        None => &a.constant / &b.constant,
    };
    b.scale(&ratio) == *a
}

/// Applies the identities to a body with unknown coefficients and collects
/// one linear equation per surviving monomial of each residual.
pub fn nf_constraints<T: Scalar>(s: &NormalFormSurface<T>) -> ConstraintSystem<T> {
    let mut equations = Vec::new();
    for t in s.u_degrees() {
        let slice = s.body.u_slice(t);
        for identity in Identity::ALL {
            for constraint in collect_constraints(&identity.residual(&slice)) {
                equations.push(LabeledConstraint { identity, u_degree: t, constraint });
            }
        }
    }
    ConstraintSystem { equations }
}

/// The special forms: the six of the main classification plus the two
/// earlier ones for the full group and for `U₁ × U_{n−1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormId {
    /// `Σ_{p≥4} C_p(u)|z|^{2p}`
    PriorUn,
    /// `Σ_{p+q≥2} C_pq(u)|z₁|^{2p}|z|^{2q}`
    PriorU1xU,
    /// `Σ C_pqrs(u) z₁^p z₂^q z̄₁^r z̄₂^s` with `(p−r)k₁ + (q−s)k₂ = 0`, `n = 2`
    A3 { k1: i64, k2: i64 },
    /// `Σ_{2p+q≥2} C_pq(u)|z₁²+z₂²+z₃²|^{2p}|z|^{2q}`, `n = 3`
    A1,
    /// `Σ C_pqr(u) z₁^p z̄₁^q |z|^{2r}`
    A2,
    /// `Σ C_pqr(u)(z·z)^p(z̄·z̄)^q|z|^{2r}`, `n = 3`
    B3,
    /// `Σ C_pqr(u)|z₁|^{2p}|z₂|^{2q}|z₃|^{2r}`, `n = 3`
    B1,
    /// `Σ C_pq(u)|z'|^{2p}|z''|^{2q}`, `n = 4`
    B2,
}

impl FormId {
    pub fn a3(k1: i64, k2: i64) -> Result<Self> {
        if k2 <= 0 || k1 == 0 || k1.gcd(&k2) != 1 {
            return Err(Error::InvalidForm(format!(
                "a3 needs non-zero coprime k1, k2 with k2 > 0, got ({k1},{k2})"
            )));
        }
        Ok(FormId::A3 { k1, k2 })
    }

    /// The ambient dimension the form is tied to, if any.
    pub fn fixed_n(self) -> Option<usize> {
        match self {
            FormId::A3 { .. } => Some(2),
            FormId::A1 | FormId::B3 | FormId::B1 => Some(3),
            FormId::B2 => Some(4),
            FormId::PriorUn | FormId::PriorU1xU | FormId::A2 => None,
        }
    }

    fn min_n(self) -> usize {
        match self {
            FormId::PriorUn => 1,
            _ => self.fixed_n().unwrap_or(2),
        }
    }

    /// Resolves and validates the ambient dimension.
    pub fn resolve_n(self, n: Option<usize>) -> Result<usize> {
        match (self.fixed_n(), n) {
            (Some(f), None) => Ok(f),
            (Some(f), Some(m)) if f == m => Ok(f),
            (Some(f), Some(m)) => Err(Error::InvalidForm(format!("form {self} lives in n = {f}, not n = {m}"))),
            (None, None) => Err(Error::InvalidForm(format!("form {self} needs an explicit n"))),
            (None, Some(m)) if m < self.min_n() => {
                Err(Error::InvalidForm(format!("form {self} needs n ≥ {}", self.min_n())))
            }
            (None, Some(m)) => Ok(m),
        }
    }

    /// The stability group whose invariants the form exhausts.
    pub fn group(self, n: usize) -> Result<GroupSpec> {
        let n = self.resolve_n(Some(n))?;
        match self {
            FormId::PriorUn => GroupSpec::full(n),
            FormId::PriorU1xU => GroupSpec::u1xu(n),
            FormId::A3 { k1, k2 } => GroupSpec::h(k1, k2, 2),
            FormId::A1 => Ok(GroupSpec::circle_so3()),
            FormId::A2 => GroupSpec::h(0, 1, n),
            FormId::B3 => Ok(GroupSpec::so3()),
            FormId::B1 => Ok(GroupSpec::u1_cubed()),
            FormId::B2 => Ok(GroupSpec::u2xu2()),
        }
    }

    /// Index tuples whose generator has bidegree `(k, l)`, without the
    /// normal-form side conditions.
    pub fn indices_for_bidegree(self, k: u32, l: u32) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        match self {
            FormId::PriorUn => {
                if k == l {
                    out.push(vec![k]);
                }
            }
            FormId::PriorU1xU | FormId::B2 => {
                if k == l {
                    out.extend((0..=k).rev().map(|p| vec![p, k - p]));
                }
            }
            FormId::A3 { k1, k2 } => {
                for p in (0..=k).rev() {
                    for r in (0..=l).rev() {
                        let (q, s) = (k - p, l - r);
                        if (p as i64 - r as i64) * k1 + (q as i64 - s as i64) * k2 == 0 {
                            out.push(vec![p, q, r, s]);
                        }
                    }
                }
            }
            FormId::A1 => {
                if k == l {
                    out.extend((0..=k / 2).rev().map(|p| vec![p, k - 2 * p]));
                }
            }
            FormId::A2 => {
                out.extend((0..=k.min(l)).map(|r| vec![k - r, l - r, r]));
            }
            FormId::B3 => {
                for r in (0..=k.min(l)).rev() {
                    if (k - r).is_multiple_of(2) && (l - r).is_multiple_of(2) {
                        out.push(vec![(k - r) / 2, (l - r) / 2, r]);
                    }
                }
            }
            FormId::B1 => {
                if k == l {
                    for p in (0..=k).rev() {
                        for q in (0..=k - p).rev() {
                            out.push(vec![p, q, k - p - q]);
                        }
                    }
                }
            }
        }
        out
    }

    /// Length of an index tuple.
    pub fn arity(self) -> usize {
        match self {
            FormId::PriorUn => 1,
            FormId::PriorU1xU | FormId::A1 | FormId::B2 => 2,
            FormId::A2 | FormId::B3 | FormId::B1 => 3,
            FormId::A3 { .. } => 4,
        }
    }

    /// The side condition of the summation, e.g. `p+r ≥ 2, q+r ≥ 2` for a2.
    /// For every form except `prior-un` it amounts to `k ≥ 2, l ≥ 2`.
    pub fn admits(self, idx: &[u32]) -> bool {
        match self {
            FormId::PriorUn => idx[0] >= 4,
            _ => {
                let (k, l) = self.index_bidegree(idx);
                k >= 2 && l >= 2
            }
        }
    }

    pub fn index_bidegree(self, idx: &[u32]) -> (u32, u32) {
        match self {
            FormId::PriorUn => (idx[0], idx[0]),
            FormId::PriorU1xU | FormId::B2 => (idx[0] + idx[1], idx[0] + idx[1]),
            FormId::A3 { .. } => (idx[0] + idx[1], idx[2] + idx[3]),
            FormId::A1 => (2 * idx[0] + idx[1], 2 * idx[0] + idx[1]),
            FormId::A2 => (idx[0] + idx[2], idx[1] + idx[2]),
            FormId::B3 => (2 * idx[0] + idx[2], 2 * idx[1] + idx[2]),
            FormId::B1 => {
                let s = idx.iter().sum();
                (s, s)
            }
        }
    }

    /// The index of the conjugate generator.
    pub fn partner(self, idx: &[u32]) -> Vec<u32> {
        match self {
            FormId::A3 { .. } => vec![idx[2], idx[3], idx[0], idx[1]],
            FormId::A2 | FormId::B3 => vec![idx[1], idx[0], idx[2]],
            _ => idx.to_vec(),
        }
    }

    /// Whether a nonzero coefficient at this index meets the form's
    /// genericity qualifier (e.g. `p ≠ q` for a2).
    pub fn is_qualifying(self, idx: &[u32]) -> bool {
        match self {
            FormId::A3 { .. } => idx[0] != idx[2] || idx[1] != idx[3],
            FormId::A1 | FormId::PriorU1xU => idx[0] > 0,
            FormId::A2 | FormId::B3 => idx[0] != idx[1],
            FormId::PriorUn | FormId::B1 | FormId::B2 => true,
        }
    }

    /// The generating product for an index tuple, expanded.
    pub fn generator<T: Scalar>(self, n: usize, idx: &[u32]) -> Result<Poly<T>> {
        let n = self.resolve_n(Some(n))?;
        let norm = Poly::<T>::norm_sq(n);
        let one_sq = |a: usize| Poly::<T>::norm_sq_range(n, a..a + 1);
        let p = match self {
            FormId::PriorUn => norm.pow(idx[0])?,
            FormId::PriorU1xU => one_sq(0).pow(idx[0])?.try_mul(&norm.pow(idx[1])?)?,
            FormId::A3 { .. } => {
                Poly::monomial(2, Monomial::new(vec![idx[0], idx[1]], vec![idx[2], idx[3]], 0))
            }
            FormId::A1 => {
                let zz = Poly::<T>::z_dot_z(3).try_mul(&Poly::zb_dot_zb(3))?;
                zz.pow(idx[0])?.try_mul(&norm.pow(idx[1])?)?
            }
            FormId::A2 => {
                let mut m = Monomial::one(n);
                m.z[0] = idx[0];
                m.zb[0] = idx[1];
                Poly::monomial(n, m).try_mul(&norm.pow(idx[2])?)?
            }
            FormId::B3 => Poly::<T>::z_dot_z(3)
                .pow(idx[0])?
                .try_mul(&Poly::zb_dot_zb(3).pow(idx[1])?)?
                .try_mul(&norm.pow(idx[2])?)?,
            FormId::B1 => {
                let m = Monomial::new(idx.to_vec(), idx.to_vec(), 0);
                Poly::monomial(3, m)
            }
            FormId::B2 => Poly::<T>::norm_sq_range(4, 0..2)
                .pow(idx[0])?
                .try_mul(&Poly::norm_sq_range(4, 2..4).pow(idx[1])?)?,
        };
        Ok(p)
    }
}

impl fmt::Display for FormId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormId::PriorUn => write!(f, "prior-un"),
            FormId::PriorU1xU => write!(f, "prior-u1xu"),
            FormId::A3 { k1, k2 } => write!(f, "a3:{k1},{k2}"),
            FormId::A1 => write!(f, "a1"),
            FormId::A2 => write!(f, "a2"),
            FormId::B3 => write!(f, "b3"),
            FormId::B1 => write!(f, "b1"),
            FormId::B2 => write!(f, "b2"),
        }
    }
}

impl FromStr for FormId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "prior-un" => Ok(FormId::PriorUn),
            "prior-u1xu" => Ok(FormId::PriorU1xU),
            "a1" => Ok(FormId::A1),
            "a2" => Ok(FormId::A2),
            "b1" => Ok(FormId::B1),
            "b2" => Ok(FormId::B2),
            "b3" => Ok(FormId::B3),
            other => {
                let bad = || Error::InvalidForm(format!("unknown form {other:?}"));
                let ks = other.strip_prefix("a3:").ok_or_else(bad)?;
                let (k1, k2) = ks.split_once(',').ok_or_else(bad)?;
                let k1 = k1.trim().parse().map_err(|_| bad())?;
                let k2 = k2.trim().parse().map_err(|_| bad())?;
                FormId::a3(k1, k2)
            }
        }
    }
}

/// A coefficient slot: index tuple plus the power of `u`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormIndex {
    pub idx: Vec<u32>,
    pub u: u32,
}

impl FormIndex {
    pub fn new(idx: Vec<u32>, u: u32) -> Self {
        FormIndex { idx, u }
    }

    /// Unknown name, e.g. `C[1,0]` or `C[2,3,0]u1`.
    pub fn unknown_name(&self) -> String {
        let body: Vec<String> = self.idx.iter().map(u32::to_string).collect();
        if self.u == 0 {
            format!("C[{}]", body.join(","))
        } else {
            format!("C[{}]u{}", body.join(","), self.u)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormCoefficients<T> {
    /// One real unknown per self-conjugate slot and a `.re`/`.im` pair per
    /// conjugate pair of slots, so the body is real by construction.
    Fresh,
    /// Given values; a slot whose conjugate partner is unassigned gives
    /// the partner the conjugate value. Everything else is zero.
    Assigned(BTreeMap<FormIndex, Gaussian<T>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormTerm<T> {
    pub index: FormIndex,
    pub coefficient: Coefficient<T>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmittedForm<T> {
    pub id: FormId,
    pub surface: NormalFormSurface<T>,
    pub terms: Vec<FormTerm<T>>,
}

impl<T: Scalar> EmittedForm<T> {
    /// Whether a term meeting the form's genericity qualifier is present.
    /// Necessary, not sufficient, for the stability group to be exactly
    /// the form's group.
    pub fn has_qualifying_term(&self) -> bool {
        self.terms.iter().any(|t| !t.coefficient.is_zero() && self.id.is_qualifying(&t.index.idx))
    }
}

/// Builds the truncated surface of a form: all admitted slots with
/// `weight(generator·u^t) ≤ max_weight` and `t ≤ u_cap`.
pub fn emit_form<T: Scalar>(
    id: FormId,
    n: Option<usize>,
    max_weight: u32,
    u_cap: u32,
    coeffs: &FormCoefficients<T>,
) -> Result<EmittedForm<T>> {
    let n = id.resolve_n(n)?;
    if let FormCoefficients::Assigned(map) = coeffs {
        for key in map.keys() {
            if key.idx.len() != id.arity() {
                return Err(Error::InvalidForm(format!("slot {:?} has the wrong arity for {id}", key.idx)));
            }
        }
    }
    let mut body = Poly::zero(n);
    let mut terms = Vec::new();
    for total in 4..=max_weight {
        for k in 2..=total - 2 {
            let l = total - k;
            for idx in id.indices_for_bidegree(k, l) {
                if !id.admits(&idx) {
                    continue;
                }
                let generator = id.generator::<T>(n, &idx)?;
                for t in 0..=u_cap {
                    if total + 2 * t > max_weight {
                        break;
                    }
                    let index = FormIndex::new(idx.clone(), t);
                    let coefficient = slot_coefficient(id, &index, coeffs);
                    let mut shifted = Poly::zero(n);
                    for (m, c) in generator.terms() {
                        let mut m = m.clone();
                        m.u += t;
                        shifted.add_term(m, c.clone());
                    }
                    body = body.try_add(&shifted.mul_coefficient(&coefficient)?)?;
                    terms.push(FormTerm { index, coefficient });
                }
            }
        }
    }
    if let FormCoefficients::Assigned(map) = coeffs {
        for (key, value) in map {
            if !terms.iter().any(|t| t.index == *key) {
                return Err(Error::InvalidForm(format!(
                    "slot {:?}@u{} is not a coefficient of {id} within weight {max_weight} and u-degree {u_cap}",
                    key.idx, key.u
                )));
            }
            let partner = FormIndex::new(id.partner(&key.idx), key.u);
            if map.get(&partner).is_some_and(|w| *w != value.conj()) {
                return Err(Error::InvalidForm(format!(
                    "slots {:?} and {:?} must carry conjugate values for a real surface",
                    key.idx, partner.idx
                )));
            }
        }
    }
    Ok(EmittedForm { id, surface: NormalFormSurface { n, max_weight, body }, terms })
}

fn slot_coefficient<T: Scalar>(id: FormId, index: &FormIndex, coeffs: &FormCoefficients<T>) -> Coefficient<T> {
    let partner = FormIndex::new(id.partner(&index.idx), index.u);
    match coeffs {
        FormCoefficients::Fresh => {
            if partner == *index {
                return Coefficient::unknown(index.unknown_name());
            }
            let (leader, sign) = if *index < partner { (index, 1) } else { (&partner, -1) };
            let base = leader.unknown_name();
            let re = Coefficient::unknown(format!("{base}.re"));
            let im = Coefficient::unknown_scaled(format!("{base}.im"), Gaussian::from_ints(0, sign));
            re.add(&im)
        }
        FormCoefficients::Assigned(map) => match (map.get(index), map.get(&partner)) {
            (Some(v), _) => Coefficient::scalar(v.clone()),
            (None, Some(v)) => Coefficient::scalar(v.conj()),
            (None, None) => Coefficient::zero(),
        },
    }
}
