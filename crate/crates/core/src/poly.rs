//! Sparse polynomials in `z₁..zₙ, z̄₁..z̄ₙ, u`.
//!
//! Coefficients are affine-linear forms in named real unknowns over the
//! Gaussian numbers. Products are allowed as long as at most one factor
//! carries unknowns, which is all the normal-form constraint extraction needs.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gaussian::Gaussian;
use crate::scalar::Scalar;

/// Exponents of `z^a z̄^b u^t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub z: Vec<u32>,
    pub zb: Vec<u32>,
    pub u: u32,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial { z: vec![0; n], zb: vec![0; n], u: 0 }
    }

    pub fn new(z: Vec<u32>, zb: Vec<u32>, u: u32) -> Self {
        assert_eq!(z.len(), zb.len(), "z and z̄ exponent vectors differ in length");
        Monomial { z, zb, u }
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    /// `(deg_z, deg_z̄)`.
    pub fn bidegree(&self) -> (u32, u32) {
        (self.z.iter().sum(), self.zb.iter().sum())
    }

    pub fn total_degree(&self) -> u32 {
        let (k, l) = self.bidegree();
        k + l + self.u
    }

    /// Chern–Moser weight: `z`, `z̄` count 1, `u` counts 2.
    pub fn weight(&self) -> u32 {
        let (k, l) = self.bidegree();
        k + l + 2 * self.u
    }

    pub fn conj(&self) -> Self {
        Monomial { z: self.zb.clone(), zb: self.z.clone(), u: self.u }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            z: self.z.iter().zip(&other.z).map(|(a, b)| a + b).collect(),
            zb: self.zb.iter().zip(&other.zb).map(|(a, b)| a + b).collect(),
            u: self.u + other.u,
        }
    }

    pub fn is_one(&self) -> bool {
        self.u == 0 && self.z.iter().chain(&self.zb).all(|&e| e == 0)
    }

    /// Same monomial with the `u` exponent cleared.
    pub fn without_u(&self) -> Monomial {
        Monomial { z: self.z.clone(), zb: self.zb.clone(), u: 0 }
    }

    fn write_factors(&self, out: &mut String) {
        let mut push = |name: String, e: u32| {
            if e == 0 {
                return;
            }
            if !out.is_empty() {
                out.push('*');
            }
            out.push_str(&name);
            if e > 1 {
                out.push('^');
                out.push_str(&e.to_string());
            }
        };
        for (a, &e) in self.z.iter().enumerate() {
            push(format!("z{}", a + 1), e);
        }
        for (a, &e) in self.zb.iter().enumerate() {
            push(format!("zb{}", a + 1), e);
        }
        push("u".to_string(), self.u);
    }
}

// Degree-lexicographic: total degree first, then z-block, z̄-block, u.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.z.cmp(&other.z))
            .then_with(|| self.zb.cmp(&other.zb))
            .then_with(|| self.u.cmp(&other.u))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_factors(&mut s);
        if s.is_empty() {
            s.push('1');
        }
        f.write_str(&s)
    }
}

/// A variable to differentiate by. Indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    Z(usize),
    Zb(usize),
    U,
}

/// `constant + Σ scale·unknown`. Unknowns are real-valued, so conjugation
/// acts on the Gaussian scales only.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coefficient<T> {
    pub constant: Gaussian<T>,
    pub terms: BTreeMap<String, Gaussian<T>>,
}

impl<T: Scalar> Coefficient<T> {
    pub fn zero() -> Self {
        Coefficient { constant: Gaussian::zero(), terms: BTreeMap::new() }
    }

    pub fn scalar(c: Gaussian<T>) -> Self {
        Coefficient { constant: c, terms: BTreeMap::new() }
    }

    pub fn unknown(name: impl Into<String>) -> Self {
        Self::unknown_scaled(name, Gaussian::one())
    }

    pub fn unknown_scaled(name: impl Into<String>, scale: Gaussian<T>) -> Self {
        let mut terms = BTreeMap::new();
        if !scale.is_zero() {
            terms.insert(name.into(), scale);
        }
        Coefficient { constant: Gaussian::zero(), terms }
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.terms.is_empty()
    }

    pub fn is_scalar(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_scalar(&self) -> Option<&Gaussian<T>> {
        self.is_scalar().then_some(&self.constant)
    }

    pub fn unknowns(&self) -> impl Iterator<Item = &str> {
        self.terms.keys().map(String::as_str)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.constant += &other.constant;
        for (name, v) in &other.terms {
            let entry = self.terms.entry(name.clone()).or_insert_with(Gaussian::zero);
            *entry += v;
            if entry.is_zero() {
                self.terms.remove(name);
            }
        }
    }

    pub fn neg(&self) -> Self {
        Coefficient {
            constant: -&self.constant,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }

    pub fn scale(&self, s: &Gaussian<T>) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Coefficient {
            constant: &self.constant * s,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * s)).collect(),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        match (self.as_scalar(), other.as_scalar()) {
            (Some(a), _) => Ok(other.scale(a)),
            (_, Some(b)) => Ok(self.scale(b)),
            _ => Err(Error::NonlinearProduct),
        }
    }

    pub fn conj(&self) -> Self {
        Coefficient {
            constant: self.constant.conj(),
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v.conj())).collect(),
        }
    }

    /// Substitutes values for unknowns. Unknowns without a value are kept.
    pub fn substitute(&self, values: &BTreeMap<String, Gaussian<T>>) -> Self {
        let mut out = Coefficient::scalar(self.constant.clone());
        for (name, scale) in &self.terms {
            match values.get(name) {
                Some(v) => out.constant += &(scale * v),
                None => {
                    out.terms.insert(name.clone(), scale.clone());
                }
            }
        }
        out
    }
}

impl<T: Scalar> fmt::Display for Coefficient<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_scalar() {
            return write!(f, "{}", self.constant);
        }
        let mut parts = Vec::new();
        if !self.constant.is_zero() {
            parts.push(self.constant.to_grammar());
        }
        for (name, scale) in &self.terms {
            if scale.is_one() {
                parts.push(name.clone());
            } else if *scale == -Gaussian::<T>::one() {
                parts.push(format!("-{name}"));
            } else {
                parts.push(format!("{}*{}", scale.to_grammar(), name));
            }
        }
        let mut s = String::new();
        for (idx, p) in parts.iter().enumerate() {
            if idx == 0 {
                s.push_str(p);
            } else if let Some(rest) = p.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(rest);
            } else {
                s.push_str(" + ");
                s.push_str(p);
            }
        }
        f.write_str(&s)
    }
}

/// Sparse polynomial in `z, z̄, u` with ambient dimension `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<T> {
    n: usize,
    terms: BTreeMap<Monomial, Coefficient<T>>,
}

impl<T: Scalar> Poly<T> {
    pub fn zero(n: usize) -> Self {
        Poly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Gaussian<T>) -> Self {
        Self::term(n, Monomial::one(n), Coefficient::scalar(c))
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Gaussian::one())
    }

    pub fn term(n: usize, m: Monomial, c: Coefficient<T>) -> Self {
        assert_eq!(m.n(), n, "monomial dimension does not match polynomial");
        let mut p = Self::zero(n);
        p.add_term(m, c);
        p
    }

    pub fn monomial(n: usize, m: Monomial) -> Self {
        Self::term(n, m, Coefficient::scalar(Gaussian::one()))
    }

    /// An unknown as a constant polynomial.
    pub fn unknown(n: usize, name: impl Into<String>) -> Self {
        Self::term(n, Monomial::one(n), Coefficient::unknown(name))
    }

    pub fn var(n: usize, v: Var) -> Result<Self> {
        let mut m = Monomial::one(n);
        match v {
            Var::Z(a) if a < n => m.z[a] = 1,
            Var::Zb(a) if a < n => m.zb[a] = 1,
            Var::U => m.u = 1,
            Var::Z(a) | Var::Zb(a) => return Err(Error::IndexOutOfRange { index: a, n }),
        }
        Ok(Self::monomial(n, m))
    }

    /// `Σ_{α ∈ range} z_α z̄_α`; the full range gives `|z|²`.
    pub fn norm_sq_range(n: usize, range: std::ops::Range<usize>) -> Self {
        let mut p = Self::zero(n);
        for a in range {
            let mut m = Monomial::one(n);
            m.z[a] = 1;
            m.zb[a] = 1;
            p.add_term(m, Coefficient::scalar(Gaussian::one()));
        }
        p
    }

    /// `|z|²`.
    pub fn norm_sq(n: usize) -> Self {
        Self::norm_sq_range(n, 0..n)
    }

    /// `z₁² + … + zₙ²`.
    pub fn z_dot_z(n: usize) -> Self {
        let mut p = Self::zero(n);
        for a in 0..n {
            let mut m = Monomial::one(n);
            m.z[a] = 2;
            p.add_term(m, Coefficient::scalar(Gaussian::one()));
        }
        p
    }

    /// `z̄₁² + … + z̄ₙ²`.
    pub fn zb_dot_zb(n: usize) -> Self {
        Self::z_dot_z(n).conjugate()
    }

    pub fn n(&self) -> usize {
        self.n
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

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Coefficient<T>)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&Coefficient<T>> {
        self.terms.get(m)
    }

    pub fn has_unknowns(&self) -> bool {
        self.terms.values().any(|c| !c.is_scalar())
    }

    /// Accumulates `c·m`, dropping the entry if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: Coefficient<T>) {
        debug_assert_eq!(m.n(), self.n);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                existing.add_assign(&c);
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        if self.has_unknowns() && other.has_unknowns() {
            return Err(Error::NonlinearProduct);
        }
        let mut out = Self::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.try_mul(cb)?);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        Poly { n: self.n, terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }

    pub fn scale(&self, s: &Gaussian<T>) -> Self {
        if s.is_zero() {
            return Self::zero(self.n);
        }
        Poly { n: self.n, terms: self.terms.iter().map(|(m, c)| (m.clone(), c.scale(s))).collect() }
    }

    /// Multiplies every coefficient by `c`; fails if both sides carry unknowns.
    pub fn mul_coefficient(&self, c: &Coefficient<T>) -> Result<Self> {
        let mut out = Self::zero(self.n);
        for (m, own) in &self.terms {
            out.add_term(m.clone(), own.try_mul(c)?);
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(self.n);
        for _ in 0..e {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    /// Formal partial derivative.
    pub fn partial(&self, v: Var) -> Result<Self> {
        match v {
            Var::Z(a) | Var::Zb(a) if a >= self.n => {
                return Err(Error::IndexOutOfRange { index: a, n: self.n })
            }
            _ => {}
        }
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            let mut dm = m.clone();
            let e = match v {
                Var::Z(a) => &mut dm.z[a],
                Var::Zb(a) => &mut dm.zb[a],
                Var::U => &mut dm.u,
            };
            if *e == 0 {
                continue;
            }
            let factor = Gaussian::from_int(*e as i64);
            *e -= 1;
            out.add_term(dm, c.scale(&factor));
        }
        Ok(out)
    }

    /// Swaps `z ↔ z̄` and conjugates coefficients.
    pub fn conjugate(&self) -> Self {
        Poly { n: self.n, terms: self.terms.iter().map(|(m, c)| (m.conj(), c.conj())).collect() }
    }

    pub fn is_real(&self) -> bool {
        self.conjugate() == *self
    }

    /// Terms of z-degree `k` and z̄-degree `l`, any power of `u`.
    pub fn bigraded_component(&self, k: u32, l: u32) -> Self {
        self.filter(|m| m.bidegree() == (k, l))
    }

    /// Terms whose `u` exponent is exactly `t`.
    pub fn u_slice(&self, t: u32) -> Self {
        self.filter(|m| m.u == t)
    }

    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Self {
        Poly {
            n: self.n,
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Distinct bidegrees present, ascending.
    pub fn bidegrees(&self) -> Vec<(u32, u32)> {
        let mut v: Vec<_> = self.terms.keys().map(Monomial::bidegree).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn u_degrees(&self) -> Vec<u32> {
        let mut v: Vec<_> = self.terms.keys().map(|m| m.u).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn max_weight(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::weight).max()
    }

    /// `P(Uz, conj(Uz), u)` for an `n×n` matrix `U` given by rows.
    pub fn compose_linear(&self, u: &[Vec<Gaussian<T>>]) -> Result<Self> {
        if u.len() != self.n || u.iter().any(|r| r.len() != self.n) {
            return Err(Error::DimensionMismatch(self.n, u.len()));
        }
        let n = self.n;
        let images: Vec<Poly<T>> = (0..n)
            .map(|a| {
                let mut p = Self::zero(n);
                for (b, entry) in u[a].iter().enumerate() {
                    let mut m = Monomial::one(n);
                    m.z[b] = 1;
                    p.add_term(m, Coefficient::scalar(entry.clone()));
                }
                p
            })
            .collect();
        let conj_images: Vec<Poly<T>> = images.iter().map(Poly::conjugate).collect();
        let mut out = Self::zero(n);
        for (m, c) in &self.terms {
            let mut acc = Self::monomial(n, Monomial { z: vec![0; n], zb: vec![0; n], u: m.u });
            for a in 0..n {
                acc = acc.try_mul(&images[a].pow(m.z[a])?)?;
                acc = acc.try_mul(&conj_images[a].pow(m.zb[a])?)?;
            }
            out = out.try_add(&acc.mul_coefficient(c)?)?;
        }
        Ok(out)
    }

    pub fn substitute(&self, values: &BTreeMap<String, Gaussian<T>>) -> Self {
        let mut out = Self::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.substitute(values));
        }
        out
    }

    /// Canonical text form, highest monomial first. Round-trips through the
    /// parser whenever all coefficients are scalar.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let t = term_text(m, c);
            if idx == 0 {
                out.push_str(&t);
            } else if let Some(rest) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&t);
            }
        }
        out
    }
}

fn term_text<T: Scalar>(m: &Monomial, c: &Coefficient<T>) -> String {
    let mut factors = String::new();
    m.write_factors(&mut factors);
    let coeff = match c.as_scalar() {
        Some(s) => {
            if factors.is_empty() {
                return s.to_grammar();
            }
            if s.is_one() {
                return factors;
            }
            if *s == -Gaussian::<T>::one() {
                return format!("-{factors}");
            }
            s.to_grammar()
        }
        None => format!("{{{c}}}"),
    };
    if factors.is_empty() {
        coeff
    } else {
        format!("{coeff}*{factors}")
    }
}

impl<T: Scalar> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<T: Scalar> std::ops::Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        self.try_add(rhs).expect("polynomial addition")
    }
}

impl<T: Scalar> std::ops::Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        self.try_sub(rhs).expect("polynomial subtraction")
    }
}

impl<T: Scalar> std::ops::Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        self.try_mul(rhs).expect("polynomial multiplication")
    }
}

impl<T: Scalar> std::ops::Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::neg(self)
    }
}

/// One equation `lhs = 0` extracted from the coefficient of `monomial`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint<T> {
    pub monomial: Monomial,
    pub lhs: Coefficient<T>,
}

/// One equation per surviving monomial; `P ≡ 0` iff all of them hold.
pub fn collect_constraints<T: Scalar>(p: &Poly<T>) -> Vec<Constraint<T>> {
    p.terms().map(|(m, c)| Constraint { monomial: m.clone(), lhs: c.clone() }).collect()
}
