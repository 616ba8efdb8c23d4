//! The Witt algebra `Wₙ` of vector fields `D(u,r) = x^r Σ uᵢ∂ᵢ` on the torus
//! and its divergence-zero subalgebra `𝕊ₙ = span{D(u,r) : (u|r) = 0}`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact_linalg::{format_rational_short, int, parse_rational, Rational, SparseVec};
use crate::weyl::{act_p, box_points, weyl_monomial, weyl_product, LaurentPoly, MultiIndex, TwistParam, WeylElement};

/// `D(u, r)`. The zero field is stored canonically as `D(0, 0)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VectorField {
    u: Vec<Rational>,
    r: MultiIndex,
}

impl VectorField {
    pub fn new(u: Vec<Rational>, r: MultiIndex) -> Self {
        assert_eq!(u.len(), r.rank(), "u and r must have the same length");
        if u.iter().all(|c| c.is_zero()) {
            let n = r.rank();
            VectorField { u, r: MultiIndex::zeros(n) }
        } else {
            VectorField { u, r }
        }
    }

    pub fn from_ints(u: &[i64], r: &[i32]) -> Self {
        Self::new(u.iter().map(|&c| int(c)).collect(), MultiIndex::new(r.iter().copied()))
    }

    /// `x^r ∂ᵢ`, i.e. `D(eᵢ, r)`.
    pub fn monomial(i: usize, r: MultiIndex) -> Self {
        let mut u = vec![Rational::zero(); r.rank()];
        u[i] = int(1);
        Self::new(u, r)
    }

    /// `∂ᵢ = D(eᵢ, 0)`.
    pub fn cartan(n: usize, i: usize) -> Self {
        Self::monomial(i, MultiIndex::zeros(n))
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![Rational::zero(); n], MultiIndex::zeros(n))
    }

    pub fn u(&self) -> &[Rational] {
        &self.u
    }

    pub fn r(&self) -> &MultiIndex {
        &self.r
    }

    pub fn rank(&self) -> usize {
        self.r.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.u.iter().all(|c| c.is_zero())
    }

    /// `(u|r)`, the divergence coefficient.
    pub fn divergence(&self) -> Rational {
        self.r.dot(&self.u)
    }

    pub fn in_sn(&self) -> bool {
        self.divergence().is_zero()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.u.iter().map(|x| x * c).collect(), self.r.clone())
    }

    /// As an element of the Weyl algebra: `Σ uᵢ x^r ∂ᵢ`.
    pub fn to_weyl(&self) -> WeylElement {
        let n = self.rank();
        SparseVec::from_terms(self.u.iter().enumerate().filter(|(_, c)| !c.is_zero()).flat_map(|(i, c)| {
            weyl_monomial(self.r.clone(), MultiIndex::unit(n, i)).into_terms().into_iter().map(move |(k, x)| (k, x * c))
        }))
    }

    /// Action on `Aₙ^λ`.
    pub fn apply(&self, p: &LaurentPoly, twist: &TwistParam) -> LaurentPoly {
        crate::weyl::apply_field(&self.u, &self.r, p, twist)
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u: Vec<String> = self.u.iter().map(format_rational_short).collect();
        write!(f, "D[({}); {}]", u.join(","), self.r)
    }
}

impl std::str::FromStr for VectorField {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("vector field `{s}` is not of the form D[(u..); (r..)]"));
        let body = s.trim().strip_prefix("D[").and_then(|t| t.strip_suffix(']')).ok_or_else(bad)?;
        let (u, r) = body.split_once(';').ok_or_else(bad)?;
        let u = u.trim().strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
        let u = u.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
        let r: MultiIndex = r.trim().parse()?;
        if u.len() != r.rank() {
            return Err(Error::RankMismatch { expected: r.rank(), got: u.len() });
        }
        Ok(VectorField::new(u, r))
    }
}

/// `[D(u,r), D(v,s)] = D((u|s)v − (v|r)u, r+s)`.
pub fn bracket(a: &VectorField, b: &VectorField) -> VectorField {
    let us = b.r.dot(&a.u);
    let vr = a.r.dot(&b.u);
    let w = a.u.iter().zip(&b.u).map(|(ui, vi)| &us * vi - &vr * ui).collect();
    VectorField::new(w, &a.r + &b.r)
}

/// A finite sum of vector fields, merged by exponent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FieldSum {
    terms: BTreeMap<MultiIndex, Vec<Rational>>,
}

impl FieldSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, c: &Rational, f: &VectorField) {
        if f.is_zero() || c.is_zero() {
            return;
        }
        let entry = self.terms.entry(f.r.clone()).or_insert_with(|| vec![Rational::zero(); f.rank()]);
        for (acc, x) in entry.iter_mut().zip(&f.u) {
            *acc += c * x;
        }
        if entry.iter().all(|x| x.is_zero()) {
            self.terms.remove(&f.r);
        }
    }

    pub fn from_fields<'a, I: IntoIterator<Item = &'a VectorField>>(fields: I) -> Self {
        let mut s = Self::new();
        let one = int(1);
        for f in fields {
            s.add(&one, f);
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn fields(&self) -> Vec<VectorField> {
        self.terms.iter().map(|(r, u)| VectorField::new(u.clone(), r.clone())).collect()
    }
}

/// `D_{i,r} = D(r_{i+1}eᵢ − rᵢe_{i+1}, r)` for 0-based `i < n−1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacentGenerator {
    pub i: usize,
    pub r: MultiIndex,
}

impl AdjacentGenerator {
    pub fn new(i: usize, r: MultiIndex) -> Result<Self> {
        if i + 1 >= r.rank() {
            return Err(Error::IndexOutOfRange { index: i + 1, n: r.rank() - 1 });
        }
        Ok(AdjacentGenerator { i, r })
    }

    pub fn field(&self) -> VectorField {
        pair_field(self.i, self.i + 1, &self.r)
    }
}

/// `D(r_j eᵢ − rᵢ e_j, r)`, always divergence-zero.
pub fn pair_field(i: usize, j: usize, r: &MultiIndex) -> VectorField {
    let mut u = vec![Rational::zero(); r.rank()];
    u[i] = int(r.get(j) as i64);
    u[j] = int(-(r.get(i) as i64));
    VectorField::new(u, r.clone())
}

/// Window spanning set of `𝕊ₙ`: all-pairs fields over the box of radius
/// `bound` plus the Cartan elements `∂ᵢ`. Zero and repeated fields are dropped.
pub fn sn_generators(n: usize, bound: i32) -> Vec<VectorField> {
    let mut out = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for r in box_points(n, bound) {
        for i in 0..n {
            for j in i + 1..n {
                let f = pair_field(i, j, &r);
                if !f.is_zero() && seen.insert(f.to_string()) {
                    out.push(f);
                }
            }
        }
    }
    out.extend((0..n).map(|i| VectorField::cartan(n, i)));
    out
}

/// Checks `D(v,s)D(u,r)p = D(v,r+s)D(u,0)p + (v|r)D(u,r+s)p` in `Aₙ^λ`,
/// evaluating both sides through Weyl-algebra products.
pub fn ddp_identity_check(
    u: &[Rational],
    v: &[Rational],
    r: &MultiIndex,
    s: &MultiIndex,
    p: &LaurentPoly,
    twist: &TwistParam,
) -> bool {
    let n = r.rank();
    let d = |w: &[Rational], e: &MultiIndex| VectorField::new(w.to_vec(), e.clone()).to_weyl();
    let rs = r + s;
    let lhs = weyl_product(&d(v, s), &d(u, r));
    let first = weyl_product(&d(v, &rs), &d(u, &MultiIndex::zeros(n)));
    let second = d(u, &rs).scale(&r.dot(v));
    let rhs = first.add(&second);
    act_p(&lhs, p, twist) == act_p(&rhs, p, twist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::rat;
    use crate::weyl::monomial;
    use proptest::prelude::*;

    fn mi(c: &[i32]) -> MultiIndex {
        MultiIndex::new(c.iter().copied())
    }

    /// Oracle: the commutator of the two fields as derivations, applied to a
    /// monomial by hand.
    fn commutator_on(a: &VectorField, b: &VectorField, t: &MultiIndex) -> LaurentPoly {
        let z = TwistParam::zero(t.rank());
        let p = monomial(t.clone());
        a.apply(&b.apply(&p, &z), &z).sub(&b.apply(&a.apply(&p, &z), &z))
    }

    #[test]
    fn bracket_examples() {
        let d = VectorField::from_ints(&[1, 0], &[0, 0]);
        assert!(bracket(&d, &d).is_zero());

        let a = VectorField::from_ints(&[1, 0], &[0, 1]);
        let b = VectorField::from_ints(&[0, 1], &[-1, 0]);
        let c = bracket(&a, &b);
        assert_eq!(c, VectorField::from_ints(&[-1, -1], &[-1, 1]));
        assert!(c.in_sn());
        for t in box_points(2, 2) {
            assert_eq!(c.apply(&monomial(t.clone()), &TwistParam::zero(2)), commutator_on(&a, &b, &t));
        }

        let b2 = VectorField::from_ints(&[1, 0], &[0, -1]);
        assert!(bracket(&a, &b2).is_zero());
    }

    #[test]
    fn generator_examples() {
        let g = sn_generators(2, 1);
        assert_eq!(g.len(), 8 + 2);
        assert!(g.iter().all(VectorField::in_sn));
        let unique: std::collections::BTreeSet<String> = g.iter().map(|f| f.to_string()).collect();
        assert_eq!(unique.len(), g.len());

        // n = 3, r = e1: the three pair fields span the plane orthogonal to r
        let r = mi(&[1, 0, 0]);
        let us: Vec<Vec<Rational>> = [(0, 1), (0, 2), (1, 2)].iter().map(|&(i, j)| pair_field(i, j, &r).u().to_vec()).collect();
        assert_eq!(us[0], vec![int(0), int(-1), int(0)]);
        assert_eq!(us[1], vec![int(0), int(0), int(-1)]);
        assert!(us[2].iter().all(|x| x.is_zero()));
        let rows: Vec<SparseVec<usize>> =
            us.iter().map(|u| SparseVec::from_terms(u.iter().cloned().enumerate())).collect();
        assert_eq!(crate::exact_linalg::rank_of(rows.iter()), 2);
    }

    #[test]
    fn pair_fields_span_orthogonal_hyperplane() {
        for n in 2..=4 {
            for r in box_points(n, 2) {
                let rows: Vec<SparseVec<usize>> = (0..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .map(|(i, j)| SparseVec::from_terms(pair_field(i, j, &r).u().iter().cloned().enumerate()))
                    .collect();
                let expected = if r.is_zero() { 0 } else { n - 1 };
                assert_eq!(crate::exact_linalg::rank_of(rows.iter()), expected, "r={r}");
            }
        }
    }

    #[test]
    fn adjacent_generator_range() {
        assert!(AdjacentGenerator::new(1, mi(&[1, 2, 3])).is_ok());
        assert!(AdjacentGenerator::new(2, mi(&[1, 2, 3])).is_err());
        let d = AdjacentGenerator::new(0, mi(&[2, 5])).unwrap().field();
        assert_eq!(d, VectorField::from_ints(&[5, -2], &[2, 5]));
        assert!(d.in_sn());
    }

    #[test]
    fn ddp_examples() {
        let e1 = vec![int(1), int(0)];
        let e2 = vec![int(0), int(1)];
        let z = TwistParam::zero(2);
        assert!(ddp_identity_check(&e1, &e1, &mi(&[0, 0]), &mi(&[0, 0]), &monomial(mi(&[2, 1])), &z));
        assert!(ddp_identity_check(&e1, &e2, &mi(&[0, 1]), &mi(&[1, 0]), &monomial(mi(&[1, 1])), &z));
    }

    #[test]
    fn cartan_is_abelian() {
        for n in 2..=4 {
            for i in 0..n {
                for j in 0..n {
                    assert!(bracket(&VectorField::cartan(n, i), &VectorField::cartan(n, j)).is_zero());
                }
            }
        }
    }

    #[test]
    fn text_form() {
        let f = VectorField::new(vec![rat(1, 2), int(-1)], mi(&[2, 1]));
        let s = f.to_string();
        assert_eq!(s, "D[(1/2,-1); (2,1)]");
        assert_eq!(s.parse::<VectorField>().unwrap(), f);
        assert!("D[(1); (1,2)]".parse::<VectorField>().is_err());
        assert_eq!(VectorField::from_ints(&[0, 0], &[3, 1]), VectorField::zero(2));
    }

    fn sn_field(n: usize) -> impl Strategy<Value = VectorField> {
        (proptest::collection::vec(-3i32..=3, n), proptest::collection::vec(-3i64..=3, n * (n - 1) / 2)).prop_map(
            move |(r, cs)| {
                let r = MultiIndex::new(r);
                let mut sum = VectorField::zero(n).u().to_vec();
                let mut idx = 0;
                for i in 0..n {
                    for j in i + 1..n {
                        let f = pair_field(i, j, &r);
                        for (acc, x) in sum.iter_mut().zip(f.u()) {
                            *acc += x * int(cs[idx]);
                        }
                        idx += 1;
                    }
                }
                VectorField::new(sum, r)
            },
        )
    }

    fn w_field(n: usize) -> impl Strategy<Value = VectorField> {
        (proptest::collection::vec(-3i32..=3, n), proptest::collection::vec((-3i64..=3, 1i64..=2), n))
            .prop_map(|(r, u)| VectorField::new(u.into_iter().map(|(p, q)| rat(p, q)).collect(), MultiIndex::new(r)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(120))]

        #[test]
        fn antisymmetry_and_jacobi(a in sn_field(3), b in sn_field(3), c in sn_field(3)) {
            let ab = bracket(&a, &b);
            prop_assert!(FieldSum::from_fields([&ab, &bracket(&b, &a)]).is_zero());
            let jac = [bracket(&ab, &c), bracket(&bracket(&b, &c), &a), bracket(&bracket(&c, &a), &b)];
            prop_assert!(FieldSum::from_fields(jac.iter()).is_zero());
            prop_assert!(ab.in_sn());
        }

        #[test]
        fn realization_fidelity(a in w_field(2), b in w_field(2), t in proptest::collection::vec(-3i32..=3, 2),
                                lam in proptest::collection::vec((-2i64..=2, 1i64..=3), 2)) {
            let tw = TwistParam::from_ratios(&lam);
            let p = monomial(MultiIndex::new(t));
            let lhs = bracket(&a, &b).apply(&p, &tw);
            let via_weyl = act_p(&a.to_weyl(), &act_p(&b.to_weyl(), &p, &tw), &tw)
                .sub(&act_p(&b.to_weyl(), &act_p(&a.to_weyl(), &p, &tw), &tw));
            prop_assert_eq!(lhs, via_weyl);
        }

        #[test]
        fn ddp_random(u in proptest::collection::vec(-2i64..=2, 3), v in proptest::collection::vec(-2i64..=2, 3),
                      r in proptest::collection::vec(-2i32..=2, 3), s in proptest::collection::vec(-2i32..=2, 3),
                      t in proptest::collection::vec(-2i32..=2, 3), lam in proptest::collection::vec((-2i64..=2, 1i64..=3), 3)) {
            let u: Vec<Rational> = u.into_iter().map(int).collect();
            let v: Vec<Rational> = v.into_iter().map(int).collect();
            prop_assert!(ddp_identity_check(&u, &v, &MultiIndex::new(r), &MultiIndex::new(s),
                &monomial(MultiIndex::new(t)), &TwistParam::from_ratios(&lam)));
        }
    }
}
