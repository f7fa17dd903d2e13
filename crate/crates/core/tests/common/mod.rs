#![allow(dead_code)]

use cm_forms::groups::{infinitesimal_action, is_invariant};
use cm_forms::invariants::invariant_basis;
use cm_forms::normal_form::{emit_form, reality_check, trace, FormCoefficients};
use cm_forms::{
    ExactMatrix, FormId, Gaussian, GaussianRational, GroupSpec, Monomial, Polynomial, Rational, RationalLieElement,
    SparseEchelon, Var,
};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub type G = GaussianRational;
pub type P = Polynomial;

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn gaussian() -> impl Strategy<Value = G> {
    (-6i64..=6, 1i64..=4, -3i64..=3, 1i64..=3).prop_map(|(a, b, c, d)| Gaussian::new(rat(a, b), rat(c, d)))
}

pub fn real_scalar() -> impl Strategy<Value = G> {
    (-6i64..=6, 1i64..=4).prop_map(|(a, b)| Gaussian::real(rat(a, b)))
}

pub fn monomial(n: usize) -> impl Strategy<Value = Monomial> {
    (prop::collection::vec(0u32..=2, n), prop::collection::vec(0u32..=2, n), 0u32..=1)
        .prop_map(|(z, zb, u)| Monomial::new(z, zb, u))
}

pub fn poly(n: usize) -> impl Strategy<Value = P> {
    prop::collection::vec((monomial(n), gaussian()), 0..5).prop_map(move |terms| {
        let mut p = P::zero(n);
        for (m, c) in terms {
            p = &p + &P::term(n, m, cm_forms::Coefficient::scalar(c));
        }
        p
    })
}

pub fn poly_triple() -> impl Strategy<Value = (P, P, P)> {
    (1usize..=3).prop_flat_map(|n| (poly(n), poly(n), poly(n)))
}

/// Independent trace: repeated partial derivatives.
pub fn trace_oracle(p: &P) -> P {
    let mut out = P::zero(p.n());
    for a in 0..p.n() {
        out = &out + &p.partial(Var::Zb(a)).unwrap().partial(Var::Z(a)).unwrap();
    }
    out
}

/// Exactly unitary matrices with rational entries: permutations,
/// `diag(i, 1, …)`, a Pythagorean rotation block, and pairwise products.
pub fn unitary_test_set(n: usize) -> Vec<Vec<Vec<G>>> {
    let id = |n: usize| -> Vec<Vec<G>> {
        (0..n).map(|r| (0..n).map(|c| if r == c { G::one() } else { G::zero() }).collect()).collect()
    };
    let mut base = Vec::new();
    for shift in 1..n {
        let mut m = vec![vec![G::zero(); n]; n];
        for (r, row) in m.iter_mut().enumerate() {
            row[(r + shift) % n] = G::one();
        }
        base.push(m);
    }
    if n >= 2 {
        let mut swap = id(n);
        swap.swap(0, 1);
        base.push(swap);
        let mut rot = id(n);
        rot[0][0] = Gaussian::real(rat(3, 5));
        rot[0][1] = Gaussian::real(rat(4, 5));
        rot[1][0] = Gaussian::real(rat(-4, 5));
        rot[1][1] = Gaussian::real(rat(3, 5));
        base.push(rot);
    }
    let mut phase = id(n);
    phase[0][0] = G::i();
    base.push(phase);
    let mut all = base.clone();
    for a in &base {
        for b in &base {
            all.push(matmul(a, b));
        }
    }
    all
}

fn matmul(a: &[Vec<G>], b: &[Vec<G>]) -> Vec<Vec<G>> {
    let n = a.len();
    (0..n)
        .map(|r| {
            (0..n)
                .map(|c| (0..n).fold(G::zero(), |acc, k| acc + &a[r][k] * &b[k][c]))
                .collect()
        })
        .collect()
}

pub fn is_unitary(u: &[Vec<G>]) -> bool {
    let n = u.len();
    (0..n).all(|r| {
        (0..n).all(|c| {
            let dot = (0..n).fold(G::zero(), |acc, k| acc + &u[r][k] * &u[c][k].conj());
            dot == if r == c { G::one() } else { G::zero() }
        })
    })
}

pub const SMALL_GROUPS: [&str; 10] =
    ["so3", "circle-so3", "u1cubed", "u1xsu:3", "su:3", "h:1,2:2", "h:-1,2:3", "un:2", "u1xu:3", "h:0,1:2"];

/// A random integer combination of a catalog group's basis.
pub fn lie_element() -> impl Strategy<Value = (GroupSpec, RationalLieElement)> {
    (0..SMALL_GROUPS.len(), prop::collection::vec(-2i64..=2, 9)).prop_map(|(gi, coeffs)| {
        let g: GroupSpec = SMALL_GROUPS[gi].parse().unwrap();
        let n = g.n();
        let mut a = RationalLieElement::zero(n);
        for (e, c) in g.lie_basis::<Rational>().iter().zip(coeffs.iter().cycle()) {
            for r in 0..n {
                for col in 0..n {
                    let v = a.get(r, col) + &(e.get(r, col) * &G::from_int(*c));
                    a.set(r, col, v);
                }
            }
        }
        (g, a)
    })
}

pub fn forms() -> Vec<(FormId, usize)> {
    vec![
        (FormId::A1, 3),
        (FormId::A2, 2),
        (FormId::A2, 3),
        (FormId::B1, 3),
        (FormId::B2, 4),
        (FormId::B3, 3),
        (FormId::a3(1, 2).unwrap(), 2),
        (FormId::a3(-1, 2).unwrap(), 2),
        (FormId::a3(2, 3).unwrap(), 2),
        (FormId::PriorUn, 2),
        (FormId::PriorUn, 3),
        (FormId::PriorU1xU, 2),
        (FormId::PriorU1xU, 3),
    ]
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg.into()))
    }
}

pub fn ring_laws((a, b, c): &(P, P, P)) -> Result<(), TestCaseError> {
    ensure(&(a + b) + c == a + &(b + c), "addition associative")?;
    ensure(a + b == b + a, "addition commutative")?;
    ensure(a * b == b * a, "multiplication commutative")?;
    ensure(&(a * b) * c == a * &(b * c), "multiplication associative")?;
    ensure(a * &(b + c) == &(a * b) + &(a * c), "distributive")?;
    ensure(&(a - b) + b == *a, "subtraction inverts addition")?;
    ensure(a * &P::one(a.n()) == *a, "unit")?;
    ensure(a + &(-a) == P::zero(a.n()), "negation")
}

pub fn calculus_laws((a, b, _): &(P, P, P)) -> Result<(), TestCaseError> {
    let n = a.n();
    for i in 0..n {
        for j in 0..n {
            let x = a.partial(Var::Z(i)).unwrap().partial(Var::Zb(j)).unwrap();
            let y = a.partial(Var::Zb(j)).unwrap().partial(Var::Z(i)).unwrap();
            ensure(x == y, "mixed partials commute")?;
        }
        let d = (a * b).partial(Var::Z(i)).unwrap();
        let leibniz = &(&a.partial(Var::Z(i)).unwrap() * b) + &(a * &b.partial(Var::Z(i)).unwrap());
        ensure(d == leibniz, "Leibniz rule")?;
    }
    let mut total = P::zero(n);
    for (k, l) in a.bidegrees() {
        total = &total + &a.bigraded_component(k, l);
    }
    ensure(total == *a, "bigraded components reassemble")
}

pub fn conjugation_laws((a, b, _): &(P, P, P)) -> Result<(), TestCaseError> {
    ensure(a.conjugate().conjugate() == *a, "involution")?;
    ensure((a * b).conjugate() == &a.conjugate() * &b.conjugate(), "multiplicative")?;
    ensure((a + b).conjugate() == &a.conjugate() + &b.conjugate(), "additive")?;
    ensure((a + &a.conjugate()).is_real(), "a + conj a is real")?;
    ensure(trace(&a.conjugate()) == trace(a).conjugate(), "trace commutes with conjugation")
}

pub fn trace_laws(((a, b, _), s, pick): &((P, P, P), G, usize)) -> Result<(), TestCaseError> {
    ensure(trace(a) == trace_oracle(a), "trace matches repeated partials")?;
    let lin = trace(&(&a.scale(s) + b));
    ensure(lin == &trace(a).scale(s) + &trace(b), "trace linear")?;
    let set = unitary_test_set(a.n());
    let u = &set[pick % set.len()];
    ensure(is_unitary(u), "test matrix unitary")?;
    let lhs = trace(&a.compose_linear(u).unwrap());
    let rhs = trace(a).compose_linear(u).unwrap();
    ensure(lhs == rhs, "trace equivariant under unitary substitution")
}

pub fn derivation_law(((_g, x), seed): &((GroupSpec, RationalLieElement), (P, P))) -> Result<(), TestCaseError> {
    ensure(x.is_anti_hermitian(), "combination stays anti-Hermitian")?;
    let n = x.n();
    // re-home the random polynomials into dimension n
    let lift = |p: &P| {
        let mut q = P::zero(n);
        for (m, c) in p.terms() {
            let mut z = vec![0; n];
            let mut zb = vec![0; n];
            let k = m.n().min(n);
            z[..k].copy_from_slice(&m.z[..k]);
            zb[..k].copy_from_slice(&m.zb[..k]);
            q.add_term(Monomial::new(z, zb, m.u), c.clone());
        }
        q
    };
    let (p, q) = (lift(&seed.0), lift(&seed.1));
    let lhs = infinitesimal_action(x, &(&p * &q)).unwrap();
    let rhs = &(&infinitesimal_action(x, &p).unwrap() * &q) + &(&p * &infinitesimal_action(x, &q).unwrap());
    ensure(lhs == rhs, "derivation law")?;
    for (k, l) in p.bidegrees() {
        let image = infinitesimal_action(x, &p.bigraded_component(k, l)).unwrap();
        ensure(image.bidegrees().iter().all(|b| *b == (k, l)), "bidegree preserved")?;
    }
    let image = infinitesimal_action(x, &p).unwrap();
    ensure(image.u_degrees().iter().all(|t| p.u_degrees().contains(t)), "u-degree preserved")
}

pub fn kernel_laws((rows, perm): &(Vec<Vec<G>>, Vec<usize>)) -> Result<(), TestCaseError> {
    let m = ExactMatrix::from_rows(rows.clone());
    let kernel = m.kernel_basis();
    ensure(kernel.len() + m.rank() == m.cols(), "rank-nullity")?;
    for v in &kernel {
        ensure(m.mul_vec(v).iter().all(Zero::is_zero), "kernel vector annihilated")?;
    }
    let mut ech = SparseEchelon::new(m.cols());
    for v in &kernel {
        ech.insert(v.iter().cloned().enumerate());
    }
    ensure(ech.rank() == kernel.len(), "kernel vectors independent")?;
    ensure(m.with_rows_permuted(perm).rank() == m.rank(), "rank invariant under row permutation")?;
    let mut sparse = SparseEchelon::new(m.cols());
    for r in rows {
        sparse.insert(r.iter().cloned().enumerate());
    }
    ensure(sparse.rank() == m.rank(), "sparse and dense ranks agree")?;
    ensure(sparse.kernel_basis() == kernel, "sparse and dense kernels agree")
}

pub fn matrix_case() -> impl Strategy<Value = (Vec<Vec<G>>, Vec<usize>)> {
    (1usize..=5, 1usize..=6).prop_flat_map(|(r, c)| {
        let entry = prop_oneof![
            2 => Just(G::zero()),
            3 => (-3i64..=3, -2i64..=2).prop_map(|(a, b)| G::from_ints(a, b)),
        ];
        let rows = prop::collection::vec(prop::collection::vec(entry, c), r);
        let perm = Just((0..r).collect::<Vec<_>>()).prop_shuffle();
        (rows, perm)
    })
}

pub const INVARIANT_CASES: [(&str, u32, u32); 10] = [
    ("so3", 2, 2),
    ("so3", 2, 0),
    ("circle-so3", 2, 2),
    ("u1cubed", 2, 2),
    ("h:1,2:2", 2, 1),
    ("h:-1,2:2", 3, 1),
    ("su:3", 2, 1),
    ("u1xsu:3", 2, 2),
    ("u2xu2", 1, 1),
    ("un:2", 2, 2),
];

/// A random complex combination of an invariant basis is invariant, and so
/// is its conjugate.
pub fn conjugate_invariance((case, coeffs): &(usize, Vec<G>)) -> Result<(), TestCaseError> {
    let (g, k, l) = INVARIANT_CASES[*case % INVARIANT_CASES.len()];
    let g: GroupSpec = g.parse().unwrap();
    let space = invariant_basis::<Rational>(&g, k, l).unwrap();
    let mut p = P::zero(g.n());
    for (b, c) in space.basis.iter().zip(coeffs) {
        p = &p + &b.scale(c);
    }
    ensure(is_invariant(&p, &g).unwrap(), "combination invariant")?;
    ensure(is_invariant(&p.conjugate(), &g).unwrap(), "conjugate invariant")
}

/// Emitted forms with random real coefficients are real, respect the
/// `k, l ≥ 2` shape and are invariant under the form's group.
pub fn emitted_form_laws((pick, weight, u_cap, values): &(usize, u32, u32, Vec<G>)) -> Result<(), TestCaseError> {
    let all = forms();
    let (id, n) = all[pick % all.len()];
    let form = emit_form::<Rational>(id, Some(n), *weight, *u_cap, &FormCoefficients::Fresh).unwrap();
    let names: Vec<String> = form.surface.body.terms().flat_map(|(_, c)| c.unknowns().map(str::to_string)).collect();
    let assignment = names.into_iter().zip(values.iter().cycle().cloned()).collect();
    let body = form.surface.body.substitute(&assignment);
    let surface = cm_forms::NormalFormSurface::new(n, *weight, body.clone()).unwrap();
    ensure(reality_check(&surface), "real body")?;
    ensure(surface.structural_issues().is_empty(), "structural invariants")?;
    ensure(is_invariant(&body, &id.group(n).unwrap()).unwrap(), "invariant under the form's group")?;
    ensure(is_invariant(&form.surface.body, &id.group(n).unwrap()).unwrap(), "symbolic body invariant")
}

pub fn emitted_case() -> impl Strategy<Value = (usize, u32, u32, Vec<G>)> {
    (0..forms().len(), 4u32..=8, 0u32..=1, prop::collection::vec(real_scalar(), 1..6))
}
