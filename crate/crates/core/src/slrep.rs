//! Explicit finite-dimensional `𝔤𝔩ₙ`-modules: trivial, natural, exterior and
//! symmetric powers, and the adjoint representation of `𝔰𝔩ₙ`.
//!
//! Matrix units are 0-based: `(i, j)` is `E_{i+1, j+1}` in one-based notation.
//! Vectors are [`VVector`]s keyed by basis position.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact_linalg::{format_rational_short, int, kernel, Rational, SparseVec};
use crate::weyl::MultiIndex;

pub type VVector = SparseVec<usize>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModuleKind {
    Trivial,
    Natural,
    Exterior(usize),
    Symmetric(usize),
    Adjoint,
}

impl ModuleKind {
    /// Parses `trivial | natural | ext:k | sym:m | adjoint`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let level = |t: &str| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad module level in `{s}`")));
        match s {
            "trivial" => Ok(ModuleKind::Trivial),
            "natural" => Ok(ModuleKind::Natural),
            "adjoint" => Ok(ModuleKind::Adjoint),
            _ => {
                if let Some(k) = s.strip_prefix("ext:") {
                    Ok(ModuleKind::Exterior(level(k)?))
                } else if let Some(m) = s.strip_prefix("sym:") {
                    Ok(ModuleKind::Symmetric(level(m)?))
                } else {
                    Err(Error::Parse(format!("unknown module `{s}`")))
                }
            }
        }
    }

    /// Whether the module is some `Λᵏℂⁿ` with `0 ≤ k ≤ n−1` as an `𝔰𝔩ₙ`-module.
    pub fn is_minuscule(&self, n: usize) -> bool {
        match *self {
            ModuleKind::Trivial | ModuleKind::Natural => true,
            ModuleKind::Exterior(k) => k <= n,
            ModuleKind::Symmetric(m) => m <= 1,
            ModuleKind::Adjoint => false,
        }
    }
}

impl fmt::Display for ModuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleKind::Trivial => f.write_str("trivial"),
            ModuleKind::Natural => f.write_str("natural"),
            ModuleKind::Exterior(k) => write!(f, "ext:{k}"),
            ModuleKind::Symmetric(m) => write!(f, "sym:{m}"),
            ModuleKind::Adjoint => f.write_str("adjoint"),
        }
    }
}

/// A dense `n × n` rational matrix, an element of `𝔤𝔩ₙ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl GlMatrix {
    pub fn zero(n: usize) -> Self {
        GlMatrix { n, entries: vec![Rational::zero(); n * n] }
    }

    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zero(n);
        m.entries[i * n + j] = Rational::one();
        m
    }

    /// `hᵢ = Eᵢᵢ − E_{i+1,i+1}`.
    pub fn cartan(n: usize, i: usize) -> Self {
        let mut m = Self::zero(n);
        m.entries[i * n + i] = Rational::one();
        m.entries[(i + 1) * n + i + 1] = -Rational::one();
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.n + j]
    }

    pub fn trace(&self) -> Rational {
        (0..self.n).map(|i| self.get(i, i).clone()).fold(Rational::zero(), |a, b| a + b)
    }

    pub fn is_traceless(&self) -> bool {
        self.trace().is_zero()
    }

    /// Nonzero entries as `(i, j, value)`.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(idx, c)| (idx / self.n, idx % self.n, c))
    }

    /// Matrix–vector product on `ℚⁿ`.
    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * &v[j]).fold(Rational::zero(), |a, b| a + b))
            .collect()
    }
}

/// The rank-one matrix `r uᵀ`; its trace is `(u|r)`.
pub fn rank_one(r: &MultiIndex, u: &[Rational]) -> GlMatrix {
    let n = r.rank();
    let mut m = GlMatrix::zero(n);
    for i in 0..n {
        if r.get(i) == 0 {
            continue;
        }
        for j in 0..n {
            m.entries[i * n + j] = int(r.get(i) as i64) * &u[j];
        }
    }
    m
}

/// A finite-dimensional `𝔤𝔩ₙ`-module with explicit action matrices of every
/// matrix unit.
#[derive(Clone, Debug)]
pub struct FinModule {
    n: usize,
    kind: ModuleKind,
    keys: Vec<Vec<usize>>,
    index: BTreeMap<Vec<usize>, usize>,
    weights: Vec<MultiIndex>,
    /// `actions[i*n + j][col]` is the image of basis vector `col` under `E_ij`.
    actions: Vec<Vec<VVector>>,
    natural_id: Rational,
    id_scalar: Option<Rational>,
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Exponent vectors `a ∈ ℤ₊ⁿ` with `|a| = m`, in reverse-lex order so `e₁^m` comes first.
fn compositions(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n - 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in (0..=left).rev() {
            cur.push(a);
            go(i + 1, n, left - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, m, &mut Vec::new(), &mut out);
    out
}

/// Sign and sorted form of `e_i ∧ e_S`, or `None` when `i ∈ S`.
fn wedge_subset(i: usize, subset: &[usize]) -> Option<(i64, Vec<usize>)> {
    if subset.contains(&i) {
        return None;
    }
    let before = subset.iter().filter(|&&s| s < i).count();
    let mut out = subset.to_vec();
    out.insert(before, i);
    Some((if before % 2 == 0 { 1 } else { -1 }, out))
}

impl FinModule {
    pub fn new(n: usize, kind: ModuleKind) -> Result<Self> {
        if n < 2 {
            return Err(Error::RankTooSmall(n));
        }
        match kind {
            ModuleKind::Trivial => Ok(Self::exterior_like(n, 0, kind)),
            ModuleKind::Natural => Ok(Self::exterior_like(n, 1, kind)),
            ModuleKind::Exterior(k) if k <= n => Ok(Self::exterior_like(n, k, kind)),
            ModuleKind::Exterior(k) => Err(Error::LevelOutOfRange { k, lo: 0, hi: n }),
            ModuleKind::Symmetric(m) => Ok(Self::symmetric(n, m)),
            ModuleKind::Adjoint => Ok(Self::adjoint(n)),
        }
    }

    pub fn exterior(n: usize, k: usize) -> Result<Self> {
        Self::new(n, ModuleKind::Exterior(k))
    }

    fn build(n: usize, kind: ModuleKind, keys: Vec<Vec<usize>>, weights: Vec<MultiIndex>, natural_id: Rational) -> Self {
        let index = keys.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
        FinModule {
            n,
            kind,
            keys,
            index,
            weights,
            actions: Vec::new(),
            id_scalar: Some(natural_id.clone()),
            natural_id,
        }
    }

    fn exterior_like(n: usize, k: usize, kind: ModuleKind) -> Self {
        let keys = subsets(n, k);
        let weights = keys
            .iter()
            .map(|s| MultiIndex::new((0..n).map(|i| s.contains(&i) as i32)))
            .collect();
        let mut m = Self::build(n, kind, keys, weights, int(k as i64));
        let mut actions = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let cols = m
                    .keys
                    .iter()
                    .map(|s| match s.iter().position(|&x| x == j) {
                        None => VVector::zero(),
                        Some(_) if i == j => VVector::unit(m.index[s]),
                        Some(pos) => {
                            // replace e_j by e_i in place, then sort
                            let mut rest = s.clone();
                            rest.remove(pos);
                            match wedge_subset(i, &rest) {
                                None => VVector::zero(),
                                Some((sign, sorted)) => {
                                    let sign = if pos % 2 == 0 { sign } else { -sign };
                                    VVector::single(m.index[&sorted], int(sign))
                                }
                            }
                        }
                    })
                    .collect();
                actions.push(cols);
            }
        }
        m.actions = actions;
        m
    }

    fn symmetric(n: usize, deg: usize) -> Self {
        let keys = compositions(n, deg);
        let weights = keys.iter().map(|a| MultiIndex::new(a.iter().map(|&x| x as i32))).collect();
        let mut m = Self::build(n, ModuleKind::Symmetric(deg), keys, weights, int(deg as i64));
        let mut actions = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                // E_ij acts as the derivation e_i ∂/∂e_j
                let cols = m
                    .keys
                    .iter()
                    .map(|a| {
                        if a[j] == 0 {
                            return VVector::zero();
                        }
                        let mut b = a.clone();
                        b[j] -= 1;
                        b[i] += 1;
                        VVector::single(m.index[&b], int(a[j] as i64))
                    })
                    .collect();
                actions.push(cols);
            }
        }
        m.actions = actions;
        m
    }

    /// Basis: `E_ab` for `a ≠ b` (key `[a, b]`) and `h_a` for `a < n−1` (key `[a, a]`).
    fn adjoint(n: usize) -> Self {
        let mut keys = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b || a + 1 < n {
                    keys.push(vec![a, b]);
                }
            }
        }
        let weights = keys
            .iter()
            .map(|k| {
                let mut w = vec![0i32; n];
                if k[0] != k[1] {
                    w[k[0]] += 1;
                    w[k[1]] -= 1;
                }
                MultiIndex::new(w)
            })
            .collect();
        let mut m = Self::build(n, ModuleKind::Adjoint, keys, weights, Rational::zero());
        let as_matrix = |k: &[usize]| -> Vec<(usize, usize, i64)> {
            if k[0] != k[1] {
                vec![(k[0], k[1], 1)]
            } else {
                vec![(k[0], k[0], 1), (k[0] + 1, k[0] + 1, -1)]
            }
        };
        let mut actions = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let cols = m
                    .keys
                    .iter()
                    .map(|k| {
                        // [E_ij, E_ab] = δ_ja E_ib − δ_bi E_aj
                        let mut commutator: BTreeMap<(usize, usize), i64> = BTreeMap::new();
                        for (a, b, c) in as_matrix(k) {
                            if j == a {
                                *commutator.entry((i, b)).or_default() += c;
                            }
                            if b == i {
                                *commutator.entry((a, j)).or_default() -= c;
                            }
                        }
                        m.decompose_traceless(&commutator)
                    })
                    .collect();
                actions.push(cols);
            }
        }
        m.actions = actions;
        m
    }

    /// Coordinates of a traceless matrix in the adjoint basis.
    fn decompose_traceless(&self, mat: &BTreeMap<(usize, usize), i64>) -> VVector {
        let mut terms = Vec::new();
        let mut partial = 0i64;
        let diag: Vec<i64> = (0..self.n).map(|a| mat.get(&(a, a)).copied().unwrap_or(0)).collect();
        debug_assert_eq!(diag.iter().sum::<i64>(), 0);
        for a in 0..self.n - 1 {
            partial += diag[a];
            terms.push((self.index[&vec![a, a]], int(partial)));
        }
        for (&(a, b), &c) in mat {
            if a != b {
                terms.push((self.index[&vec![a, b]], int(c)));
            }
        }
        VVector::from_terms(terms)
    }

    /// Replaces the scalar by which the identity matrix acts (`None` keeps only
    /// the `𝔰𝔩ₙ` structure).
    pub fn with_id_scalar(mut self, b: Option<Rational>) -> Self {
        self.id_scalar = b;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> ModuleKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.keys.len()
    }

    pub fn id_scalar(&self) -> Option<&Rational> {
        self.id_scalar.as_ref()
    }

    pub fn is_minuscule(&self) -> bool {
        self.kind.is_minuscule(self.n)
    }

    /// Exterior level `k` for `Λᵏ`, trivial (`0`) and natural (`1`) modules.
    pub fn exterior_level(&self) -> Option<usize> {
        match self.kind {
            ModuleKind::Exterior(k) => Some(k),
            ModuleKind::Trivial => Some(0),
            ModuleKind::Natural => Some(1),
            _ => None,
        }
    }

    pub fn key(&self, idx: usize) -> &[usize] {
        &self.keys[idx]
    }

    pub fn index_of(&self, key: &[usize]) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn label(&self, idx: usize) -> String {
        let k = &self.keys[idx];
        match self.kind {
            ModuleKind::Trivial | ModuleKind::Natural | ModuleKind::Exterior(_) => {
                if k.is_empty() {
                    "1".to_string()
                } else {
                    k.iter().map(|i| format!("e{}", i + 1)).collect::<Vec<_>>().join("^")
                }
            }
            ModuleKind::Symmetric(_) => {
                let parts: Vec<String> = k
                    .iter()
                    .enumerate()
                    .filter(|(_, &a)| a > 0)
                    .map(|(i, &a)| if a == 1 { format!("e{}", i + 1) } else { format!("e{}^{a}", i + 1) })
                    .collect();
                if parts.is_empty() {
                    "1".to_string()
                } else {
                    parts.join("*")
                }
            }
            ModuleKind::Adjoint => {
                if k[0] == k[1] {
                    format!("h{}", k[0] + 1)
                } else {
                    format!("E{}{}", k[0] + 1, k[1] + 1)
                }
            }
        }
    }

    /// `coeff·key` terms joined by ` + `.
    pub fn format_vector(&self, v: &VVector) -> String {
        if v.is_zero() {
            return "0".to_string();
        }
        v.iter()
            .map(|(k, c)| format!("{}·{}", format_rational_short(c), self.label(*k)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Image of basis vector `col` under `E_ij` (natural `𝔤𝔩ₙ` action).
    pub fn unit_column(&self, i: usize, j: usize, col: usize) -> &VVector {
        &self.actions[i * self.n + j][col]
    }

    /// `E_ij · v`.
    pub fn e_act(&self, i: usize, j: usize, v: &VVector) -> Result<VVector> {
        if i >= self.n || j >= self.n {
            return Err(Error::IndexOutOfRange { index: i.max(j) + 1, n: self.n });
        }
        Ok(self.e_act_unchecked(i, j, v))
    }

    pub(crate) fn e_act_unchecked(&self, i: usize, j: usize, v: &VVector) -> VVector {
        let cols = &self.actions[i * self.n + j];
        let mut terms = Vec::new();
        for (col, c) in v.iter() {
            for (row, x) in cols[*col].iter() {
                terms.push((*row, c * x));
            }
        }
        let mut out = VVector::from_terms(terms);
        if i == j {
            if let Some(shift) = self.identity_shift() {
                out = out.add_scaled(&shift, v);
            }
        }
        out
    }

    /// Extra scalar added to every `Eᵢᵢ` so that the identity acts by `id_scalar`.
    fn identity_shift(&self) -> Option<Rational> {
        let b = self.id_scalar.as_ref()?;
        if *b == self.natural_id {
            None
        } else {
            Some((b - &self.natural_id) / int(self.n as i64))
        }
    }

    /// `X · v` for `X ∈ 𝔤𝔩ₙ`; non-traceless `X` needs an identity scalar.
    pub fn act(&self, x: &GlMatrix, v: &VVector) -> Result<VVector> {
        if self.id_scalar.is_none() && !x.is_traceless() {
            return Err(Error::MissingIdScalar(crate::exact_linalg::format_rational(&x.trace())));
        }
        let mut terms: Vec<(Rational, VVector)> = Vec::new();
        for (i, j, c) in x.nonzero_entries() {
            terms.push((c.clone(), self.e_act_unchecked(i, j, v)));
        }
        Ok(crate::exact_linalg::linear_combine(&terms))
    }

    /// Natural `𝔤𝔩ₙ`-weight (the `Eᵢᵢ` eigenvalues before any identity shift).
    pub fn weight_of(&self, idx: usize) -> &MultiIndex {
        &self.weights[idx]
    }

    /// Actual `Eᵢᵢ` eigenvalues, including the identity shift.
    pub fn gl_weight(&self, idx: usize) -> Vec<Rational> {
        let shift = self.identity_shift().unwrap_or_else(Rational::zero);
        self.weights[idx].as_slice().iter().map(|&w| int(w as i64) + &shift).collect()
    }

    /// The `v_λ` offset of the weight lattice: all weights lie in `λ + ℤⁿ`.
    pub fn weight_offset(&self) -> Vec<Rational> {
        vec![self.identity_shift().unwrap_or_else(Rational::zero); self.n]
    }

    /// Multiset of natural `𝔤𝔩ₙ`-weights, sorted.
    pub fn character(&self) -> Vec<MultiIndex> {
        let mut w = self.weights.clone();
        w.sort();
        w
    }

    /// Multiset of `𝔰𝔩ₙ`-weights (eigenvalues of `h₁,…,h_{n−1}`), sorted.
    pub fn sl_character(&self) -> Vec<MultiIndex> {
        let mut w: Vec<MultiIndex> = self
            .weights
            .iter()
            .map(|m| MultiIndex::new((0..self.n - 1).map(|i| m.get(i) - m.get(i + 1))))
            .collect();
        w.sort();
        w
    }

    /// Whether every `E_ij`, `i ≠ j`, acts nilpotently.
    pub fn nilpotency_check(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.unit_power_vanishes(i, j, self.dim())))
    }

    /// Whether `E_ij^p = 0` on the whole module.
    pub fn unit_power_vanishes(&self, i: usize, j: usize, p: usize) -> bool {
        (0..self.dim()).all(|col| {
            let mut v = VVector::unit(col);
            for _ in 0..p {
                v = self.e_act_unchecked(i, j, &v);
                if v.is_zero() {
                    break;
                }
            }
            v.is_zero()
        })
    }

    /// Vectors killed by all raising operators `E_ij`, `i < j`.
    pub fn highest_weight_vectors(&self) -> Vec<VVector> {
        let images: Vec<SparseVec<(usize, usize, usize)>> = (0..self.dim())
            .map(|col| {
                let mut terms = Vec::new();
                for i in 0..self.n {
                    for j in i + 1..self.n {
                        for (row, c) in self.unit_column(i, j, col).iter() {
                            terms.push(((i, j, *row), c.clone()));
                        }
                    }
                }
                SparseVec::from_terms(terms)
            })
            .collect();
        kernel(&images)
    }
}

/// `e_i ∧ w` for `w ∈ Λᵏ`, landing in `Λᵏ⁺¹`.
pub fn wedge(i: usize, w: &VVector, from: &FinModule, to: &FinModule) -> Result<VVector> {
    let k = from.exterior_level().ok_or_else(|| Error::NotExterior(from.kind.to_string()))?;
    let k1 = to.exterior_level().ok_or_else(|| Error::NotExterior(to.kind.to_string()))?;
    if k1 != k + 1 || from.n != to.n {
        return Err(Error::LevelOutOfRange { k: k1, lo: k + 1, hi: k + 1 });
    }
    if i >= from.n {
        return Err(Error::IndexOutOfRange { index: i + 1, n: from.n });
    }
    Ok(wedge_unchecked(i, w, from, to))
}

pub(crate) fn wedge_unchecked(i: usize, w: &VVector, from: &FinModule, to: &FinModule) -> VVector {
    VVector::from_terms(w.iter().filter_map(|(idx, c)| {
        wedge_subset(i, from.key(*idx)).map(|(sign, s)| (to.index[&s], c * int(sign)))
    }))
}
