//! Invariant polynomials of bidegree `(k, l)` under the catalog groups.
//!
//! The group acts on `z, z̄` only (`z ↦ Uz`, `w ↦ w`), so `u` is inert and
//! every space is computed with `u` factored out. The space is the common
//! kernel of the infinitesimal action of a Lie algebra basis on the
//! monomials of bidegree `(k, l)`.

use std::collections::HashMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gaussian::Gaussian;
use crate::groups::{action_on_monomial, GroupKind, GroupSpec};
use crate::matrix::{ExactMatrix, SparseEchelon};
use crate::normal_form::FormId;
use crate::poly::{Coefficient, Monomial, Poly};
use crate::scalar::Scalar;

pub const DEFAULT_MONOMIAL_CAP: usize = 20_000;

/// The monomial cap, raised by `CM_FORMS_DEGREE_CAP` when set.
pub fn monomial_cap() -> usize {
    std::env::var("CM_FORMS_DEGREE_CAP")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MONOMIAL_CAP)
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `C(k+n−1, n−1)·C(l+n−1, n−1)`.
pub fn monomial_count(n: usize, k: u32, l: u32) -> usize {
    let n = n as u64;
    if n == 0 {
        return usize::from(k == 0 && l == 0);
    }
    (binomial(k as u64 + n - 1, n - 1) * binomial(l as u64 + n - 1, n - 1)) as usize
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All monomials `z^a z̄^b` with `|a| = k`, `|b| = l`, in ascending order.
pub fn monomials_of_bidegree(n: usize, k: u32, l: u32) -> Vec<Monomial> {
    let zs = compositions(k, n);
    let zbs = compositions(l, n);
    let mut out: Vec<Monomial> =
        zs.iter().flat_map(|a| zbs.iter().map(move |b| Monomial::new(a.clone(), b.clone(), 0))).collect();
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantSpace<T> {
    pub group: GroupSpec,
    pub bidegree: (u32, u32),
    pub basis: Vec<Poly<T>>,
}

impl<T> InvariantSpace<T> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn check_cap(n: usize, k: u32, l: u32, cap: usize) -> Result<()> {
    let count = monomial_count(n, k, l);
    if count > cap {
        return Err(Error::CapExceeded { count, cap });
    }
    Ok(())
}

/// Sparse rows of the stacked action matrix, columns indexed by `cols`.
fn action_rows<T: Scalar>(g: &GroupSpec, cols: &[Monomial]) -> Vec<Vec<(usize, Gaussian<T>)>> {
    let index: HashMap<&Monomial, usize> = cols.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows: Vec<Vec<(usize, Gaussian<T>)>> = Vec::new();
    for a in g.lie_basis::<T>() {
        let mut by_output: HashMap<Monomial, Vec<(usize, Gaussian<T>)>> = HashMap::new();
        for (j, m) in cols.iter().enumerate() {
            for (out, c) in action_on_monomial(&a, m).terms() {
                debug_assert!(index.contains_key(out));
                let v = c.as_scalar().expect("scalar").clone();
                by_output.entry(out.clone()).or_default().push((j, v));
            }
        }
        let mut keyed: Vec<_> = by_output.into_iter().collect();
        keyed.sort_by(|x, y| x.0.cmp(&y.0));
        rows.extend(keyed.into_iter().map(|(_, r)| r));
    }
    rows
}

/// The invariance system as a dense matrix; only sensible for small cases.
pub fn invariance_matrix<T: Scalar>(g: &GroupSpec, k: u32, l: u32) -> (Vec<Monomial>, ExactMatrix<T>) {
    let cols = monomials_of_bidegree(g.n(), k, l);
    let rows = action_rows::<T>(g, &cols);
    let mut m = ExactMatrix::zeros(rows.len(), cols.len());
    for (i, r) in rows.into_iter().enumerate() {
        for (j, v) in r {
            let cur = m.get(i, j).clone();
            m.set(i, j, cur + v);
        }
    }
    (cols, m)
}

fn vector_to_poly<T: Scalar>(n: usize, cols: &[Monomial], v: impl IntoIterator<Item = (usize, Gaussian<T>)>) -> Poly<T> {
    let mut p = Poly::zero(n);
    for (j, c) in v {
        p.add_term(cols[j].clone(), Coefficient::scalar(c));
    }
    p
}

pub fn invariant_basis<T: Scalar>(g: &GroupSpec, k: u32, l: u32) -> Result<InvariantSpace<T>> {
    invariant_basis_with_cap(g, k, l, monomial_cap())
}

/// Exact basis of the `G`-invariant polynomials of bidegree `(k, l)`.
/// Deterministic: one basis vector per free monomial, leading entry 1.
pub fn invariant_basis_with_cap<T: Scalar>(g: &GroupSpec, k: u32, l: u32, cap: usize) -> Result<InvariantSpace<T>> {
    check_cap(g.n(), k, l, cap)?;
    let cols = monomials_of_bidegree(g.n(), k, l);
    let mut rows = action_rows::<T>(g, &cols);
    // short rows first: torus generators pin whole columns immediately
    rows.sort_by_key(Vec::len);
    let mut ech = SparseEchelon::new(cols.len());
    for r in rows {
        if ech.rank() == cols.len() {
            break;
        }
        ech.insert(r);
    }
    let basis = ech.kernel_basis_sparse().into_iter().map(|v| vector_to_poly(g.n(), &cols, v)).collect();
    Ok(InvariantSpace { group: *g, bidegree: (k, l), basis })
}

/// Same space through the dense fraction-free route.
pub fn invariant_basis_dense<T: Scalar>(g: &GroupSpec, k: u32, l: u32) -> Result<InvariantSpace<T>> {
    check_cap(g.n(), k, l, monomial_cap())?;
    let (cols, m) = invariance_matrix::<T>(g, k, l);
    let basis = m
        .kernel_basis()
        .into_iter()
        .map(|v| vector_to_poly(g.n(), &cols, v.into_iter().enumerate().filter(|(_, c)| !c.is_zero())))
        .collect();
    Ok(InvariantSpace { group: *g, bidegree: (k, l), basis })
}

/// The generating products of a form restricted to bidegree `(k, l)`,
/// expanded. Normal-form side conditions are not applied here.
pub fn claimed_family<T: Scalar>(id: FormId, n: usize, k: u32, l: u32) -> Result<Vec<Poly<T>>> {
    let n = id.resolve_n(Some(n))?;
    id.indices_for_bidegree(k, l).iter().map(|idx| id.generator(n, idx)).collect()
}

/// Common bidegree of a list of polynomials, with `u` ignored.
fn common_bidegree<T: Scalar>(polys: &[&Poly<T>], expected: Option<(u32, u32)>) -> Result<Option<(u32, u32)>> {
    let mut found = expected;
    for p in polys {
        for (m, c) in p.terms() {
            if !c.is_scalar() {
                return Err(Error::UnknownsPresent);
            }
            let b = m.bidegree();
            match found {
                None => found = Some(b),
                Some(f) if f != b => return Err(Error::BidegreeMismatch(f.0, f.1, b.0, b.1)),
                _ => {}
            }
        }
    }
    Ok(found)
}

/// Complex rank of polynomials in monomial coordinates.
pub fn span_rank<T: Scalar>(polys: &[Poly<T>]) -> usize {
    let mut index: HashMap<Monomial, usize> = HashMap::new();
    for p in polys {
        for (m, _) in p.terms() {
            let next = index.len();
            index.entry(m.clone()).or_insert(next);
        }
    }
    let mut ech = SparseEchelon::new(index.len());
    for p in polys {
        ech.insert(p.terms().map(|(m, c)| (index[m], c.as_scalar().cloned().unwrap_or_else(Gaussian::zero))));
    }
    ech.rank()
}

/// Whether two families span the same space: `rank A = rank B = rank(A ∪ B)`.
pub fn span_equal<T: Scalar>(a: &[Poly<T>], b: &[Poly<T>]) -> Result<bool> {
    let all: Vec<&Poly<T>> = a.iter().chain(b).collect();
    if let Some(first) = all.first() {
        if let Some(p) = all.iter().find(|p| p.n() != first.n()) {
            return Err(Error::DimensionMismatch(first.n(), p.n()));
        }
    }
    let ba = common_bidegree(&a.iter().collect::<Vec<_>>(), None)?;
    common_bidegree(&b.iter().collect::<Vec<_>>(), ba)?;
    let ra = span_rank(a);
    let rb = span_rank(b);
    if ra != rb {
        return Ok(false);
    }
    let union: Vec<Poly<T>> = a.iter().chain(b).cloned().collect();
    Ok(span_rank(&union) == ra)
}

/// Closed-form count of invariants of bidegree `(k, l)` from the branching
/// rules of each group, independent of any elimination.
pub fn invariant_dim_count(g: &GroupSpec, k: u32, l: u32) -> usize {
    let (k, l) = (k as usize, l as usize);
    let n = g.n();
    let diagonal = usize::from(k == l);
    // Sᵏ(ℂ³) under SO₃ holds one harmonic of each degree k, k−2, …
    let so3 = if k % 2 == l % 2 { k.min(l) / 2 + 1 } else { 0 };
    match g.kind() {
        GroupKind::So3 => so3,
        // the center acts with weight k − l
        GroupKind::CircleSo3 => diagonal * so3,
        // exponent vectors of z and z̄ must agree
        GroupKind::U1Cubed => diagonal * binomial(k as u64 + 2, 2) as usize,
        GroupKind::FullUn => diagonal,
        // |z₁|^{2p} times |rest|^{2(k−p)}; SU_m has invariants on SᵃV ⊗ SᵇV̄ iff a = b
        GroupKind::U1xU | GroupKind::U2xU2 | GroupKind::U1xSu => diagonal * (k + 1),
        // z₁^p z̄₁^q times |z'|^{2r}
        GroupKind::SuBlock => k.min(l) + 1,
        GroupKind::H { k1, k2 } if n == 2 => {
            let mut count = 0;
            for p in 0..=k {
                for r in 0..=l {
                    let (q, s) = (k - p, l - r);
                    if (p as i64 - r as i64) * k1 + (q as i64 - s as i64) * k2 == 0 {
                        count += 1;
                    }
                }
            }
            count
        }
        GroupKind::H { k1, .. } => {
            if k1 == 0 {
                k.min(l) + 1
            } else {
                diagonal * (k + 1)
            }
        }
    }
}
