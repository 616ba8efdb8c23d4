//! Laurent polynomials, the Weyl algebra over them in `x^r ∂^a` normal form
//! (with `∂ᵢ = xᵢ d/dxᵢ`), and the twisted weight modules `Aₙ^λ`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::exact_linalg::{format_rational_short, int, parse_rational, Rational, SpanBasis, SparseVec};

/// An exponent vector in `ℤⁿ`, ordered lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(SmallVec<[i32; 4]>);

impl MultiIndex {
    pub fn new<I: IntoIterator<Item = i32>>(components: I) -> Self {
        MultiIndex(components.into_iter().collect())
    }

    pub fn zeros(n: usize) -> Self {
        MultiIndex(SmallVec::from_elem(0, n))
    }

    /// The standard basis vector `e_i` (0-based `i`).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut m = Self::zeros(n);
        m.0[i] = 1;
        m
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[i32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> i32 {
        self.0[i]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Max-norm `max |rᵢ|`.
    pub fn norm(&self) -> i32 {
        self.0.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    pub fn scaled(&self, c: i32) -> Self {
        MultiIndex(self.0.iter().map(|x| x * c).collect())
    }

    pub fn with(&self, i: usize, value: i32) -> Self {
        let mut m = self.clone();
        m.0[i] = value;
        m
    }

    /// `(u|r)` for a rational vector `u`.
    pub fn dot(&self, u: &[Rational]) -> Rational {
        self.0
            .iter()
            .zip(u)
            .filter(|(r, _)| **r != 0)
            .map(|(r, x)| x * int(*r as i64))
            .fold(Rational::zero(), |a, b| a + b)
    }

    pub fn to_rationals(&self) -> Vec<Rational> {
        self.0.iter().map(|&c| int(c as i64)).collect()
    }
}

impl Add for &MultiIndex {
    type Output = MultiIndex;
    fn add(self, o: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &MultiIndex {
    type Output = MultiIndex;
    fn sub(self, o: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &MultiIndex {
    type Output = MultiIndex;
    fn neg(self) -> MultiIndex {
        MultiIndex(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl std::str::FromStr for MultiIndex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("multi-index `{s}` needs parentheses")))?;
        inner
            .split(',')
            .map(|c| c.trim().parse::<i32>().map_err(|_| Error::Parse(format!("bad component in `{s}`"))))
            .collect::<Result<SmallVec<_>>>()
            .map(MultiIndex)
    }
}

/// All points of the box `{s : |sᵢ| ≤ bound}` in lexicographic order.
pub fn box_points(n: usize, bound: i32) -> Vec<MultiIndex> {
    let mut out = vec![MultiIndex::zeros(0)];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * (2 * bound as usize + 1));
        for p in &out {
            for c in -bound..=bound {
                let mut q = p.clone();
                q.0.push(c);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

pub fn in_box(s: &MultiIndex, bound: i32) -> bool {
    s.norm() <= bound
}

/// Elements of `Aₙ = ℂ[x₁^{±1},…,xₙ^{±1}]` (over ℚ).
pub type LaurentPoly = SparseVec<MultiIndex>;

pub fn monomial(r: MultiIndex) -> LaurentPoly {
    SparseVec::unit(r)
}

/// Multiplies by `x^r`.
pub fn shift(p: &LaurentPoly, r: &MultiIndex) -> LaurentPoly {
    p.map_keys(|s| s + r)
}

/// Text form: `coeff x^(r1,...,rn)` terms in key order, joined by ` + `;
/// the zero polynomial is `0`.
pub fn format_laurent(p: &LaurentPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    p.iter()
        .map(|(r, c)| format!("{} x^{}", format_rational_short(c), r))
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn parse_laurent(s: &str) -> Result<LaurentPoly> {
    let s = s.trim();
    if s == "0" {
        return Ok(LaurentPoly::zero());
    }
    let mut terms = Vec::new();
    for term in s.split(" + ") {
        let (c, m) = term
            .trim()
            .split_once(" x^")
            .ok_or_else(|| Error::Parse(format!("bad Laurent term `{term}`")))?;
        terms.push((m.parse::<MultiIndex>()?, parse_rational(c)?));
    }
    Ok(LaurentPoly::from_terms(terms))
}

/// Basis key of the Weyl algebra: the normal-ordered monomial `x^x ∂^d`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeylKey {
    pub x: MultiIndex,
    pub d: MultiIndex,
}

/// An element `Σ c · x^r ∂^a` of the Weyl algebra, all `x` left of all `∂`.
pub type WeylElement = SparseVec<WeylKey>;

pub fn weyl_monomial(x: MultiIndex, d: MultiIndex) -> WeylElement {
    debug_assert!(d.as_slice().iter().all(|&a| a >= 0));
    SparseVec::unit(WeylKey { x, d })
}

/// `x^r`
pub fn weyl_x(r: MultiIndex) -> WeylElement {
    let n = r.rank();
    weyl_monomial(r, MultiIndex::zeros(n))
}

/// The Euler operator `∂ᵢ` (0-based `i`).
pub fn weyl_euler(n: usize, i: usize) -> WeylElement {
    weyl_monomial(MultiIndex::zeros(n), MultiIndex::unit(n, i))
}

fn binomial(n: i64, k: i64) -> i64 {
    (0..k).fold(1i64, |acc, j| acc * (n - j) / (j + 1))
}

/// `∂^a · x^s = x^s · Π(∂ᵢ + sᵢ)^{aᵢ}`, expanded binomially.
fn commute_past(d: &MultiIndex, s: &MultiIndex) -> Vec<(MultiIndex, Rational)> {
    let mut out: Vec<(MultiIndex, Rational)> = vec![(MultiIndex::zeros(0), Rational::one())];
    for (&a, &si) in d.as_slice().iter().zip(s.as_slice()) {
        let mut next = Vec::with_capacity(out.len() * (a as usize + 1));
        for (prefix, coeff) in &out {
            for c in 0..=a {
                let weight = int(binomial(a as i64, c as i64)) * int(si as i64).pow(a - c);
                if weight.is_zero() {
                    continue;
                }
                let mut p = prefix.clone();
                p.0.push(c);
                next.push((p, coeff * weight));
            }
        }
        out = next;
    }
    out
}

pub fn weyl_product(a: &WeylElement, b: &WeylElement) -> WeylElement {
    let mut terms = Vec::new();
    for (ka, ca) in a.iter() {
        for (kb, cb) in b.iter() {
            let x = &ka.x + &kb.x;
            let c = ca * cb;
            for (deg, w) in commute_past(&ka.d, &kb.x) {
                terms.push((WeylKey { x: x.clone(), d: &deg + &kb.d }, &c * w));
            }
        }
    }
    SparseVec::from_terms(terms)
}

/// The twist `λ = (λ₁,…,λₙ)`; `λ̃(∂ⱼ) = ∂ⱼ − λⱼ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwistParam(pub Vec<Rational>);

impl TwistParam {
    pub fn zero(n: usize) -> Self {
        TwistParam(vec![Rational::zero(); n])
    }

    pub fn from_ratios(parts: &[(i64, i64)]) -> Self {
        TwistParam(parts.iter().map(|&(p, q)| crate::exact_linalg::rat(p, q)).collect())
    }

    pub fn parse(s: &str) -> Result<Self> {
        s.split(',').map(parse_rational).collect::<Result<Vec<_>>>().map(TwistParam)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    /// `λ` itself as an exponent, when integral.
    pub fn as_multi_index(&self) -> Option<MultiIndex> {
        if !self.is_integral() {
            return None;
        }
        Some(MultiIndex::new(self.0.iter().map(|c| i32::try_from(c.to_integer()).unwrap_or(i32::MAX))))
    }

    /// Euler eigenvalue `sᵢ − λᵢ` of `x^s` under the twisted action.
    pub fn eigenvalue(&self, s: &MultiIndex, i: usize) -> Rational {
        int(s.get(i) as i64) - &self.0[i]
    }

    /// `(u | s − λ)`: the scalar by which `D(u,0)` acts on `x^s`.
    pub fn pairing(&self, s: &MultiIndex, u: &[Rational]) -> Rational {
        u.iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| x * self.eigenvalue(s, i))
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Coordinatewise difference reduced modulo `ℤⁿ` into `[0,1)`.
    pub fn class_mod_integers(&self) -> Vec<Rational> {
        self.0.iter().map(|c| c - c.floor()).collect()
    }

    pub fn add(&self, other: &TwistParam) -> TwistParam {
        TwistParam(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for TwistParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(crate::exact_linalg::format_rational).collect();
        f.write_str(&parts.join(","))
    }
}

/// `y ∘_λ p = λ̃(y) p` on `Aₙ^λ`: `x^r ∂^a` sends `x^s` to `Π(sᵢ−λᵢ)^{aᵢ} x^{r+s}`.
pub fn act_p(y: &WeylElement, p: &LaurentPoly, twist: &TwistParam) -> LaurentPoly {
    let mut terms = Vec::new();
    for (k, cy) in y.iter() {
        for (s, cp) in p.iter() {
            let mut c = cy * cp;
            for (i, &a) in k.d.as_slice().iter().enumerate() {
                if a > 0 {
                    c *= twist.eigenvalue(s, i).pow(a);
                }
            }
            if !c.is_zero() {
                terms.push((&k.x + s, c));
            }
        }
    }
    SparseVec::from_terms(terms)
}

/// `D(u,r) p = x^r Σ uᵢ ∂ᵢ p` on `Aₙ^λ`.
pub fn apply_field(u: &[Rational], r: &MultiIndex, p: &LaurentPoly, twist: &TwistParam) -> LaurentPoly {
    SparseVec::from_terms(p.iter().map(|(s, c)| (r + s, c * twist.pairing(s, u))))
}

/// Window part of `𝔥P = Σᵢ ∂ᵢ P`, spanned by `∂ᵢ x^s` for `s` in the box.
pub fn hp_span(twist: &TwistParam, bound: i32) -> SpanBasis<MultiIndex> {
    let n = twist.rank();
    let mut basis = SpanBasis::new();
    for s in box_points(n, bound) {
        for i in 0..n {
            basis.insert(&act_p(&weyl_euler(n, i), &monomial(s.clone()), twist));
        }
    }
    basis
}
