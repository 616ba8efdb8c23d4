//! Tensor modules `P ⊗ V` with `P = Aₙ^λ` and `V` a finite-dimensional
//! `𝔤𝔩ₙ`-module, under the two vector-field actions:
//!
//! * `ShenLarsson`: `D(u,r)(z⊗y) = D(u,r)z ⊗ y + x^r z ⊗ (r uᵀ)y`,
//! * `Llz`: `(x^{r−e_j}∂_j)∘(p⊗w) = (x^{r−e_j}∂_j p)⊗w + Σᵢ rᵢ x^{r−eᵢ}p ⊗ E_ij w`,
//!
//! together with the de Rham maps `d_k`, `π_k`, the isomorphism `φ` between
//! the two pictures, the submodules `𝓛ₙ(P,k) = im d_{k−1}` and
//! `𝓛̃ₙ(P,k) = ker d_k`, and the maps `g_{i,s}`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact_linalg::{format_rational_short, int, Rational, SpanBasis, SparseVec};
use crate::slrep::{rank_one, wedge_unchecked, FinModule, VVector};
use crate::torusfields::VectorField;
use crate::weyl::{box_points, LaurentPoly, MultiIndex, TwistParam};

/// Basis key `x^s ⊗ v_key`.
pub type FvKey = (MultiIndex, usize);

/// An element of `P ⊗ V`.
pub type FvElement = SparseVec<FvKey>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ActionStyle {
    ShenLarsson,
    Llz,
}

impl ActionStyle {
    fn name(self) -> &'static str {
        match self {
            ActionStyle::ShenLarsson => "ShenLarsson",
            ActionStyle::Llz => "LLZ",
        }
    }
}

/// `p ⊗ w` for a Laurent polynomial and a vector of `V`.
pub fn tensor(p: &LaurentPoly, w: &VVector) -> FvElement {
    SparseVec::from_terms(p.iter().flat_map(|(s, a)| w.iter().map(move |(k, b)| ((s.clone(), *k), a * b))))
}

pub fn basis_element(s: MultiIndex, key: usize) -> FvElement {
    SparseVec::unit((s, key))
}

/// The module `P ⊗ V`: twist of `P`, the finite-dimensional factor, and the action style.
#[derive(Clone, Debug)]
pub struct TensorModule {
    twist: TwistParam,
    v: Arc<FinModule>,
    style: ActionStyle,
}

impl TensorModule {
    pub fn new(twist: TwistParam, v: FinModule, style: ActionStyle) -> Result<Self> {
        Self::with_shared(twist, Arc::new(v), style)
    }

    pub fn with_shared(twist: TwistParam, v: Arc<FinModule>, style: ActionStyle) -> Result<Self> {
        if twist.rank() != v.n() {
            return Err(Error::RankMismatch { expected: v.n(), got: twist.rank() });
        }
        Ok(TensorModule { twist, v, style })
    }

    pub fn n(&self) -> usize {
        self.v.n()
    }

    pub fn twist(&self) -> &TwistParam {
        &self.twist
    }

    pub fn v(&self) -> &FinModule {
        &self.v
    }

    pub fn style(&self) -> ActionStyle {
        self.style
    }

    fn require(&self, style: ActionStyle) -> Result<()> {
        if self.style != style {
            return Err(Error::StyleMismatch { module: self.style.name(), needed: style.name() });
        }
        Ok(())
    }

    /// All basis vectors `x^s ⊗ v` with `s` in the box of radius `bound`.
    pub fn window_basis(&self, bound: i32) -> Vec<FvElement> {
        box_points(self.n(), bound)
            .into_iter()
            .flat_map(|s| (0..self.v.dim()).map(move |k| basis_element(s.clone(), k)))
            .collect()
    }

    pub fn window_dim(&self, bound: i32) -> usize {
        (2 * bound as usize + 1).pow(self.n() as u32) * self.v.dim()
    }

    /// `D(u,r) · m` in the Shen–Larsson picture. Fields outside `𝕊ₙ` need an
    /// identity scalar on `V`.
    pub fn act_shen(&self, x: &VectorField, m: &FvElement) -> Result<FvElement> {
        Ok(self.shen_operator(x)?.apply(m))
    }

    /// `D(u,r)` with its `ruᵀ` columns on `V` precomputed, for applying one
    /// field to many elements.
    pub fn shen_operator(&self, x: &VectorField) -> Result<ShenOperator<'_>> {
        self.require(ActionStyle::ShenLarsson)?;
        if !x.in_sn() && self.v.id_scalar().is_none() {
            return Err(Error::MissingIdScalar(crate::exact_linalg::format_rational(&x.divergence())));
        }
        let columns = if x.r().is_zero() || x.is_zero() {
            Vec::new()
        } else {
            let mat = rank_one(x.r(), x.u());
            (0..self.v.dim()).map(|key| self.v.act(&mat, &VVector::unit(key))).collect::<Result<Vec<_>>>()?
        };
        Ok(ShenOperator { twist: &self.twist, field: x.clone(), columns })
    }

    /// `x^s · m`: shifts the `P` factor.
    pub fn act_laurent(&self, s: &MultiIndex, m: &FvElement) -> FvElement {
        m.map_keys(|(t, k)| (s + t, *k))
    }

    /// `(x^{r−e_j}∂_j) ∘ m` in the LLZ picture (0-based `j`).
    pub fn act_llz(&self, j: usize, r: &MultiIndex, m: &FvElement) -> Result<FvElement> {
        self.require(ActionStyle::Llz)?;
        if self.v.id_scalar().is_none() {
            return Err(Error::MissingIdScalar("LLZ action".into()));
        }
        let n = self.n();
        if j >= n {
            return Err(Error::IndexOutOfRange { index: j + 1, n });
        }
        let rj = r - &MultiIndex::unit(n, j);
        let mut terms = Vec::new();
        for ((s, key), c) in m.iter() {
            let ev = self.twist.eigenvalue(s, j);
            if !ev.is_zero() {
                terms.push(((&rj + s, *key), c * ev));
            }
            for i in 0..n {
                if r.get(i) == 0 {
                    continue;
                }
                let target = &(r - &MultiIndex::unit(n, i)) + s;
                let coeff = c * int(r.get(i) as i64);
                for (k2, y) in self.v.unit_column(i, j, *key).iter() {
                    terms.push(((target.clone(), *k2), &coeff * y));
                }
                if i == j {
                    if let Some(shift) = self.v_identity_shift() {
                        terms.push(((target.clone(), *key), &coeff * shift));
                    }
                }
            }
        }
        Ok(SparseVec::from_terms(terms))
    }

    fn v_identity_shift(&self) -> Option<Rational> {
        let offset = self.v.weight_offset();
        (!offset[0].is_zero()).then(|| offset[0].clone())
    }

    /// A general field `D(u,r) = Σ_j u_j x^{(r+e_j)−e_j}∂_j` in the LLZ picture.
    pub fn act_llz_field(&self, x: &VectorField, m: &FvElement) -> Result<FvElement> {
        let n = self.n();
        let mut out = FvElement::zero();
        for (j, c) in x.u().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let part = self.act_llz(j, &(x.r() + &MultiIndex::unit(n, j)), m)?;
            out = out.add_scaled(c, &part);
        }
        Ok(out)
    }

    /// Dispatches on the module's style.
    pub fn act(&self, x: &VectorField, m: &FvElement) -> Result<FvElement> {
        match self.style {
            ActionStyle::ShenLarsson => self.act_shen(x, m),
            ActionStyle::Llz => self.act_llz_field(x, m),
        }
    }

    /// Splits `m` into simultaneous `∂ᵢ`-eigencomponents, keyed by the
    /// eigenvalue tuple `s − λ`. Under either action `∂ᵢ` acts on `x^s ⊗ V`
    /// by `sᵢ − λᵢ` (the `V` term carries a factor `r = 0`).
    pub fn weight_decompose(&self, m: &FvElement) -> BTreeMap<Vec<Rational>, FvElement> {
        let mut parts: BTreeMap<Vec<Rational>, Vec<(FvKey, Rational)>> = BTreeMap::new();
        for ((s, k), c) in m.iter() {
            let ev: Vec<Rational> = (0..self.n()).map(|i| self.twist.eigenvalue(s, i)).collect();
            parts.entry(ev).or_default().push(((s.clone(), *k), c.clone()));
        }
        parts.into_iter().map(|(k, v)| (k, SparseVec::from_terms(v))).collect()
    }

    /// `sᵢ − λᵢ` eigenvalues of the `∂ᵢ`, via the module action itself.
    pub fn cartan_images(&self, m: &FvElement) -> Result<Vec<FvElement>> {
        (0..self.n()).map(|i| self.act(&VectorField::cartan(self.n(), i), m)).collect()
    }

    /// Text form: `coeff · x^(s) ⊗ key` terms in key order.
    pub fn format_element(&self, m: &FvElement) -> String {
        if m.is_zero() {
            return "0".to_string();
        }
        m.iter()
            .map(|((s, k), c)| format!("{} · x^{} ⊗ {}", format_rational_short(c), s, self.v.label(*k)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Target of `φ`: the LLZ module over `P^{λ̃}`, `λ` the weight offset of `V`.
    pub fn phi_target(&self, v_lambda: &TwistParam) -> Result<TensorModule> {
        TensorModule::with_shared(self.twist.add(v_lambda), self.v.clone(), ActionStyle::Llz)
    }

    /// `μ` with `gl-weight(key) = λ + μ`.
    fn mu(&self, key: usize, v_lambda: &TwistParam) -> Result<MultiIndex> {
        let w = self.v.gl_weight(key);
        let diff: Vec<Rational> = w.iter().zip(&v_lambda.0).map(|(a, b)| a - b).collect();
        if diff.iter().any(|d| !d.is_integer()) {
            return Err(Error::WeightLattice(self.v.kind().to_string()));
        }
        Ok(MultiIndex::new(diff.iter().map(|d| i32::try_from(d.to_integer()).expect("small weight"))))
    }

    /// `φ(p ⊗ v_μ) = x^{−μ}p ⊗ v_μ` from the Shen–Larsson module to its LLZ target.
    pub fn phi_map(&self, m: &FvElement, v_lambda: &TwistParam) -> Result<FvElement> {
        self.require(ActionStyle::ShenLarsson)?;
        self.shift_by_weight(m, v_lambda, -1)
    }

    /// `φ⁻¹`, applied on the Shen–Larsson side's behalf.
    pub fn phi_inverse(&self, m: &FvElement, v_lambda: &TwistParam) -> Result<FvElement> {
        self.require(ActionStyle::ShenLarsson)?;
        self.shift_by_weight(m, v_lambda, 1)
    }

    fn shift_by_weight(&self, m: &FvElement, v_lambda: &TwistParam, sign: i32) -> Result<FvElement> {
        let mut terms = Vec::with_capacity(m.len());
        for ((s, k), c) in m.iter() {
            let mu = self.mu(*k, v_lambda)?;
            terms.push(((s + &mu.scaled(sign), *k), c.clone()));
        }
        Ok(SparseVec::from_terms(terms))
    }
}

/// A field bound to a module, see [`TensorModule::shen_operator`].
pub struct ShenOperator<'a> {
    twist: &'a TwistParam,
    field: VectorField,
    columns: Vec<VVector>,
}

impl ShenOperator<'_> {
    pub fn apply(&self, m: &FvElement) -> FvElement {
        let x = &self.field;
        if x.is_zero() {
            return FvElement::zero();
        }
        let mut terms = Vec::new();
        for ((s, key), c) in m.iter() {
            let shifted = x.r() + s;
            let scalar = self.twist.pairing(s, x.u());
            if !scalar.is_zero() {
                terms.push(((shifted.clone(), *key), c * scalar));
            }
            if let Some(image) = self.columns.get(*key) {
                for (k2, y) in image.iter() {
                    terms.push(((shifted.clone(), *k2), c * y));
                }
            }
        }
        SparseVec::from_terms(terms)
    }
}

/// The exterior powers `Λ⁰,…,Λⁿ` over one `P = Aₙ^λ`, with the maps between
/// the tensor modules built on them.
#[derive(Clone, Debug)]
pub struct DeRhamComplex {
    twist: TwistParam,
    ext: Vec<Arc<FinModule>>,
}

impl DeRhamComplex {
    pub fn new(twist: TwistParam) -> Result<Self> {
        let n = twist.rank();
        let ext = (0..=n).map(|k| FinModule::exterior(n, k).map(Arc::new)).collect::<Result<Vec<_>>>()?;
        Ok(DeRhamComplex { twist, ext })
    }

    pub fn n(&self) -> usize {
        self.twist.rank()
    }

    pub fn twist(&self) -> &TwistParam {
        &self.twist
    }

    pub fn exterior(&self, k: usize) -> &FinModule {
        &self.ext[k]
    }

    /// `𝓕(P, Λᵏ)` (Shen–Larsson) or `F(P, Λᵏ)` (LLZ).
    pub fn module(&self, k: usize, style: ActionStyle) -> TensorModule {
        TensorModule { twist: self.twist.clone(), v: self.ext[k].clone(), style }
    }

    fn check_level(&self, k: usize, lo: usize, hi: usize) -> Result<()> {
        if k < lo || k > hi {
            return Err(Error::LevelOutOfRange { k, lo, hi });
        }
        Ok(())
    }

    /// `d_k(p⊗w) = Σᵢ ∂ᵢp ⊗ eᵢ∧w`, from level `k` to `k+1`.
    pub fn d_map(&self, k: usize, m: &FvElement) -> Result<FvElement> {
        self.check_level(k, 0, self.n() - 1)?;
        Ok(self.wedge_map(k, m, false))
    }

    /// `π_k(p⊗w) = Σᵢ x^{−eᵢ}∂ᵢp ⊗ eᵢ∧w`.
    pub fn pi_map(&self, k: usize, m: &FvElement) -> Result<FvElement> {
        self.check_level(k, 0, self.n() - 1)?;
        Ok(self.wedge_map(k, m, true))
    }

    fn wedge_map(&self, k: usize, m: &FvElement, shift: bool) -> FvElement {
        let n = self.n();
        let (from, to) = (&self.ext[k], &self.ext[k + 1]);
        let mut terms = Vec::new();
        for ((s, key), c) in m.iter() {
            for i in 0..n {
                let ev = self.twist.eigenvalue(s, i);
                if ev.is_zero() {
                    continue;
                }
                let target = if shift { s - &MultiIndex::unit(n, i) } else { s.clone() };
                let coeff = c * ev;
                for (k2, y) in wedge_unchecked(i, &VVector::unit(*key), from, to).iter() {
                    terms.push(((target.clone(), *k2), &coeff * y));
                }
            }
        }
        SparseVec::from_terms(terms)
    }

    /// `p ⊠ w = d_{k−1}(p ⊗ w)` for `w ∈ Λ^{k−1}`.
    pub fn boxtimes(&self, k: usize, p: &LaurentPoly, w: &VVector) -> Result<FvElement> {
        self.check_level(k, 1, self.n())?;
        self.d_map(k - 1, &tensor(p, w))
    }

    /// Generators `x^s ⊠ w` of `𝓛ₙ(P,k)` over the window (empty for `k = 0`).
    pub fn l_generators(&self, k: usize, bound: i32) -> Result<Vec<FvElement>> {
        self.check_level(k, 0, self.n())?;
        if k == 0 {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for s in box_points(self.n(), bound) {
            for key in 0..self.ext[k - 1].dim() {
                let g = self.d_map(k - 1, &basis_element(s.clone(), key))?;
                if !g.is_zero() {
                    out.push(g);
                }
            }
        }
        Ok(out)
    }

    /// Window part of `𝓛ₙ(P,k)`, row reduced.
    pub fn l_span(&self, k: usize, bound: i32) -> Result<SpanBasis<FvKey>> {
        Ok(SpanBasis::from_vectors(self.l_generators(k, bound)?.iter()))
    }

    /// Degree-`t` part of `𝓛ₙ(P,k)` as a span over the basis of `Λᵏ`:
    /// `(t − λ) ∧ Λ^{k−1}`.
    pub fn l_piece(&self, k: usize, t: &MultiIndex) -> Result<SpanBasis<usize>> {
        self.check_level(k, 0, self.n())?;
        let mut span = SpanBasis::new();
        if k == 0 {
            return Ok(span);
        }
        for key in 0..self.ext[k - 1].dim() {
            let img = self.d_map(k - 1, &basis_element(t.clone(), key))?;
            span.insert(&img.map_keys(|(_, k2)| *k2));
        }
        Ok(span)
    }

    /// Membership in `𝓛̃ₙ(P,k) = ker d_k`.
    pub fn ltilde_member(&self, k: usize, m: &FvElement) -> Result<bool> {
        Ok(self.d_map(k, m)?.is_zero())
    }

    /// `g_{i,s}` on `𝓕(P, Λᵏ)` (0-based `i`, needs `i + 2 < n`):
    /// `x^s∂_{i+1}p⊗E_{i,i+2}w − x^s∂_{i+2}p⊗E_{i,i+1}w + Σ_l x^s∂_l p⊗E_{l,i+2}E_{i,i+1}w`
    /// in one-based indices.
    pub fn g_map(&self, k: usize, i: usize, s: &MultiIndex, m: &FvElement) -> Result<FvElement> {
        let n = self.n();
        if i + 2 >= n {
            return Err(Error::IndexOutOfRange { index: i + 3, n });
        }
        self.check_level(k, 1, n)?;
        let v = &self.ext[k];
        let (a, b, c) = (i, i + 1, i + 2);
        let mut terms: Vec<(FvKey, Rational)> = Vec::new();
        for ((t, key), coeff) in m.iter() {
            let target = s + t;
            let w = VVector::unit(*key);
            let mut push = |scalar: Rational, image: VVector| {
                if scalar.is_zero() {
                    return;
                }
                for (k2, y) in image.iter() {
                    terms.push(((target.clone(), *k2), coeff * &scalar * y));
                }
            };
            push(self.twist.eigenvalue(t, b), v.e_act_unchecked(a, c, &w));
            push(-self.twist.eigenvalue(t, c), v.e_act_unchecked(a, b, &w));
            let inner = v.e_act_unchecked(a, b, &w);
            for l in 0..n {
                push(self.twist.eigenvalue(t, l), v.e_act_unchecked(l, c, &inner));
            }
        }
        Ok(SparseVec::from_terms(terms))
    }
}
