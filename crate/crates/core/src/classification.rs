//! The arithmetic skeleton of the subgroup classification.
//!
//! For a connected closed `H ⊂ Uₙ` of dimension `d`:
//!
//! * the block structure of `ℂⁿ = V₁ ⊕ … ⊕ V_m` must satisfy `Σ nⱼ² ≥ d`;
//! * a product `n = n₁⋯n_k` with `k ≥ 2`, `nⱼ ≥ 2` forces `Σ nⱼ² ≤ n² − 2n`,
//!   so a semisimple irreducible `𝔥^ℂ` of dimension `≥ n² − 2n + 1` is simple;
//! * a simple algebra must then match the table of minimal faithful
//!   representation dimensions, and `ℂⁿ` must be one of its irreducible
//!   representations, decided with the Weyl dimension formula.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::Rational;

/// All partitions `n₁ ≥ … ≥ n_m` of `n` with `Σ nⱼ² ≥ d`, in descending
/// lexicographic order (`[3]` before `[2,1]` before `[1,1,1]`).
pub fn block_structures(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, max_part: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=max_part.min(rest)).rev() {
            cur.push(part);
            rec(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut all = Vec::new();
    rec(n, n, &mut Vec::new(), &mut all);
    all.into_iter().filter(|p| p.iter().map(|x| x * x).sum::<usize>() >= d).collect()
}

/// Unordered factorizations of `n` into at least two factors `≥ 2`,
/// factors non-increasing.
pub fn multiplicative_partitions(n: u64) -> Vec<Vec<u64>> {
    fn rec(rest: u64, max_factor: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest == 1 {
            if cur.len() >= 2 {
                out.push(cur.clone());
            }
            return;
        }
        for f in (2..=max_factor.min(rest)).rev() {
            if rest.is_multiple_of(f) {
                cur.push(f);
                rec(rest / f, f, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if n >= 4 {
        rec(n, n, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorizationReport {
    pub n_max: u64,
    pub factorizations_checked: usize,
    /// Factorizations with `Σ nⱼ² = n² − 2n`.
    pub tight: Vec<(u64, Vec<u64>)>,
    pub violations: Vec<(u64, Vec<u64>)>,
}

impl FactorizationReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn factorization_report(n_max: u64) -> FactorizationReport {
    let mut report = FactorizationReport { n_max, factorizations_checked: 0, tight: vec![], violations: vec![] };
    for n in 4..=n_max {
        let bound = n * n - 2 * n;
        for f in multiplicative_partitions(n) {
            report.factorizations_checked += 1;
            let s: u64 = f.iter().map(|x| x * x).sum();
            if s > bound {
                report.violations.push((n, f));
            } else if s == bound {
                report.tight.push((n, f));
            }
        }
    }
    report
}

/// `Σ nⱼ² ≤ n² − 2n` for every factorization of every `n ≤ n_max`.
pub fn factorization_bound_check(n_max: u64) -> bool {
    factorization_report(n_max).holds()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    /// `sl_k`, `k ≥ 2`
    Sl,
    /// `o_k`, `k ≥ 7`
    O,
    /// `sp_{2k}`, `k ≥ 2`
    Sp,
    E6,
    E7,
    E8,
    F4,
    G2,
}

/// A row of the table of minimal faithful irreducible representations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SimpleAlgebraRow {
    pub family: Family,
    /// `k` in `sl_k`, `o_k`, `sp_{2k}`; 0 for the exceptional algebras.
    pub k: u64,
    pub min_faithful_dim: u64,
    pub algebra_dim: u64,
}

impl SimpleAlgebraRow {
    pub fn sl(k: u64) -> Self {
        SimpleAlgebraRow { family: Family::Sl, k, min_faithful_dim: k, algebra_dim: k * k - 1 }
    }

    pub fn o(k: u64) -> Self {
        SimpleAlgebraRow { family: Family::O, k, min_faithful_dim: k, algebra_dim: k * (k - 1) / 2 }
    }

    pub fn sp(k: u64) -> Self {
        SimpleAlgebraRow { family: Family::Sp, k, min_faithful_dim: 2 * k, algebra_dim: 2 * k * k + k }
    }

    pub const EXCEPTIONAL: [SimpleAlgebraRow; 5] = [
        SimpleAlgebraRow { family: Family::E6, k: 0, min_faithful_dim: 27, algebra_dim: 78 },
        SimpleAlgebraRow { family: Family::E7, k: 0, min_faithful_dim: 56, algebra_dim: 133 },
        SimpleAlgebraRow { family: Family::E8, k: 0, min_faithful_dim: 248, algebra_dim: 248 },
        SimpleAlgebraRow { family: Family::F4, k: 0, min_faithful_dim: 26, algebra_dim: 52 },
        SimpleAlgebraRow { family: Family::G2, k: 0, min_faithful_dim: 7, algebra_dim: 14 },
    ];

    /// Root system for the classical rows.
    pub fn root_system(&self) -> Option<RootSystem> {
        let k = self.k as usize;
        match self.family {
            Family::Sl => RootSystem::new(RootType::A, k - 1).ok(),
            Family::Sp => RootSystem::new(RootType::C, k).ok(),
            Family::O if k % 2 == 1 => RootSystem::new(RootType::B, (k - 1) / 2).ok(),
            Family::O => RootSystem::new(RootType::D, k / 2).ok(),
            _ => None,
        }
    }
}

impl fmt::Display for SimpleAlgebraRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Sl => write!(f, "sl_{}", self.k),
            Family::O => write!(f, "o_{}", self.k),
            Family::Sp => write!(f, "sp_{}", 2 * self.k),
            Family::E6 => write!(f, "e6"),
            Family::E7 => write!(f, "e7"),
            Family::E8 => write!(f, "e8"),
            Family::F4 => write!(f, "f4"),
            Family::G2 => write!(f, "g2"),
        }
    }
}

/// Every table row whose minimal faithful dimension is at most `n_max`.
pub fn table_rows(n_max: u64) -> Vec<SimpleAlgebraRow> {
    let mut rows: Vec<_> = (2..=n_max).map(SimpleAlgebraRow::sl).collect();
    rows.extend((7..=n_max).map(SimpleAlgebraRow::o));
    rows.extend((2..=n_max / 2).map(SimpleAlgebraRow::sp));
    rows.extend(SimpleAlgebraRow::EXCEPTIONAL.iter().filter(|r| r.min_faithful_dim <= n_max));
    rows
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DimFormula {
    /// `n² − 2n + 1`
    PlusOne,
    /// `n² − 2n`
    Zero,
    /// `n² − 2n − 1`
    MinusOne,
}

impl DimFormula {
    pub fn eval(self, n: u64) -> i64 {
        let base = (n * n) as i64 - 2 * n as i64;
        match self {
            DimFormula::PlusOne => base + 1,
            DimFormula::Zero => base,
            DimFormula::MinusOne => base - 1,
        }
    }
}

impl fmt::Display for DimFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DimFormula::PlusOne => "n2-2n+1",
            DimFormula::Zero => "n2-2n",
            DimFormula::MinusOne => "n2-2n-1",
        })
    }
}

impl FromStr for DimFormula {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "n2-2n+1" => Ok(DimFormula::PlusOne),
            "n2-2n" => Ok(DimFormula::Zero),
            "n2-2n-1" => Ok(DimFormula::MinusOne),
            other => Err(Error::Parse { pos: 0, msg: format!("unknown dimension formula {other:?}") }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ScanHit {
    pub row: SimpleAlgebraRow,
    pub n: u64,
}

/// Table rows with `min_faithful_dim ≤ n ≤ n_max` and `algebra_dim = formula(n)`.
pub fn simple_algebra_scan(formula: DimFormula, n_max: u64) -> Vec<ScanHit> {
    let mut hits = Vec::new();
    for row in table_rows(n_max) {
        for n in row.min_faithful_dim.max(2)..=n_max {
            if formula.eval(n) == row.algebra_dim as i64 {
                hits.push(ScanHit { row, n });
            }
        }
    }
    hits.sort_by_key(|h| (h.n, h.row));
    hits
}

/// Keeps the hits for which `ℂⁿ` can be an irreducible representation.
/// Exceptional rows have no root data here and are kept whenever `n`
/// reaches the tabulated minimum.
pub fn rep_existence_filter(hits: &[ScanHit]) -> Vec<ScanHit> {
    hits.iter()
        .copied()
        .filter(|h| {
            if h.n < h.row.min_faithful_dim {
                return false;
            }
            match h.row.root_system() {
                Some(rs) => irrep_dims_upto(&rs, h.n).contains(&h.n),
                None => true,
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RootType {
    A,
    B,
    C,
    D,
}

impl FromStr for RootType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(RootType::A),
            "B" | "b" => Ok(RootType::B),
            "C" | "c" => Ok(RootType::C),
            "D" | "d" => Ok(RootType::D),
            other => Err(Error::InvalidRootSystem(format!("unknown type {other:?}"))),
        }
    }
}

/// A classical root system in the standard `ε`-coordinates.
///
/// Every root has integer coordinates; `ρ` and the fundamental weights may
/// be half-integral and are stored doubled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    pub root_type: RootType,
    pub rank: usize,
    pub positive_roots: Vec<Vec<i64>>,
    rho2: Vec<i64>,
    omega2: Vec<Vec<i64>>,
    // nonzero coordinates of each positive root
    sparse_roots: Vec<Vec<(usize, i64)>>,
}

impl RootSystem {
    pub fn new(root_type: RootType, rank: usize) -> Result<Self> {
        let min_rank = if root_type == RootType::D { 2 } else { 1 };
        if rank < min_rank {
            return Err(Error::InvalidRootSystem(format!("{root_type:?}{rank}")));
        }
        let dim = if root_type == RootType::A { rank + 1 } else { rank };
        let root = |entries: &[(usize, i64)]| {
            let mut v = vec![0; dim];
            for &(i, c) in entries {
                v[i] += c;
            }
            v
        };

        let mut roots = Vec::new();
        for i in 0..dim {
            for j in i + 1..dim {
                roots.push(root(&[(i, 1), (j, -1)]));
                if root_type != RootType::A {
                    roots.push(root(&[(i, 1), (j, 1)]));
                }
            }
            match root_type {
                RootType::B => roots.push(root(&[(i, 1)])),
                RootType::C => roots.push(root(&[(i, 2)])),
                _ => {}
            }
        }

        let mut rho2 = vec![0; dim];
        for r in &roots {
            for (x, y) in rho2.iter_mut().zip(r) {
                *x += y;
            }
        }

        // ε₁ + … + ε_{i+1}, doubled
        let prefix = |i: usize, value: i64| {
            let mut v = vec![0; dim];
            for x in v.iter_mut().take(i + 1) {
                *x = value;
            }
            v
        };
        let omega2 = (0..rank)
            .map(|i| match root_type {
                RootType::B | RootType::D if i == rank - 1 => prefix(i, 1),
                RootType::D if i == rank - 2 => {
                    let mut v = prefix(rank - 1, 1);
                    v[rank - 1] = -1;
                    v
                }
                _ => prefix(i, 2),
            })
            .collect();

        let sparse_roots = roots
            .iter()
            .map(|r: &Vec<i64>| r.iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, c)| (i, *c)).collect())
            .collect();
        Ok(RootSystem { root_type, rank, positive_roots: roots, rho2, omega2, sparse_roots })
    }

    /// Parses names such as `A2`, `C3`, `D4`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (t, r) = s.split_at(s.chars().next().map_or(0, char::len_utf8));
        let rank = r.parse().map_err(|_| Error::InvalidRootSystem(s.to_string()))?;
        Self::new(t.parse()?, rank)
    }

    pub fn name(&self) -> String {
        format!("{:?}{}", self.root_type, self.rank)
    }

    /// Half the sum of the positive roots.
    pub fn rho(&self) -> Vec<Rational> {
        self.rho2.iter().map(|&x| Rational::new(BigInt::from(x), BigInt::from(2))).collect()
    }

    /// The `i`-th fundamental weight in `ε`-coordinates.
    pub fn fundamental_weight(&self, i: usize) -> Vec<Rational> {
        self.omega2[i].iter().map(|&x| Rational::new(BigInt::from(x), BigInt::from(2))).collect()
    }

    /// Positive-root count from the classical formulas.
    pub fn expected_positive_root_count(&self) -> usize {
        let k = self.rank;
        match self.root_type {
            RootType::A => k * (k + 1) / 2,
            RootType::B | RootType::C => k * k,
            RootType::D => k * (k - 1),
        }
    }

    fn shifted_weight2(&self, labels: &[i64]) -> Vec<i64> {
        let mut v = self.rho2.clone();
        for (lab, w) in labels.iter().zip(&self.omega2) {
            for (x, y) in v.iter_mut().zip(w) {
                *x += y * lab;
            }
        }
        v
    }
}

/// Dimension of the irreducible representation with highest weight given by
/// Dynkin labels: `Π_{α>0} ⟨λ+ρ, α⟩ / ⟨ρ, α⟩`.
pub fn weyl_dim(rs: &RootSystem, labels: &[i64]) -> Result<BigUint> {
    if labels.len() != rs.rank {
        return Err(Error::WeightLength { got: labels.len(), rank: rs.rank });
    }
    if labels.iter().any(|&x| x < 0) {
        return Err(Error::NonDominantWeight(labels.to_vec()));
    }
    let shifted = rs.shifted_weight2(labels);
    let dot = |v: &[i64], root: &[(usize, i64)]| root.iter().map(|&(i, c)| v[i] * c).sum::<i64>();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for root in &rs.sparse_roots {
        num *= dot(&shifted, root);
        den *= dot(&rs.rho2, root);
    }
    let (q, r) = (&num / &den, &num % &den);
    assert!(r.is_zero() && q.is_positive(), "Weyl dimension must be a positive integer");
    Ok(q.to_biguint().expect("positive"))
}

/// All irreducible dimensions `≤ bound`. Each label is increased only while
/// the dimension stays within the bound, which terminates because the
/// dimension is strictly increasing in every label.
pub fn irrep_dims_upto(rs: &RootSystem, bound: u64) -> BTreeSet<u64> {
    fn rec(rs: &RootSystem, i: usize, labels: &mut Vec<i64>, bound: u64, out: &mut BTreeSet<u64>) {
        if i == rs.rank {
            if let Some(d) = weyl_dim(rs, labels).ok().and_then(|d| d.to_u64()) {
                if d <= bound {
                    out.insert(d);
                }
            }
            return;
        }
        loop {
            let d = weyl_dim(rs, labels).expect("dominant");
            if d > BigUint::from(bound) {
                break;
            }
            rec(rs, i + 1, labels, bound, out);
            labels[i] += 1;
        }
        labels[i] = 0;
    }
    let mut out = BTreeSet::new();
    let mut labels = vec![0; rs.rank];
    rec(rs, 0, &mut labels, bound, &mut out);
    out
}
