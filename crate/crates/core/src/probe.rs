//! Truncated-window closure of `𝕊ₙ`-orbits in `𝓕(P,V)` and the evidence and
//! exact checks built on it.
//!
//! Every field `D(u,r)` maps the degree-`t` piece `xᵗ ⊗ V` into degree `t+r`,
//! and the Cartan fields separate degrees, so submodules are graded. Spans are
//! therefore kept per degree, as subspaces of `V`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact_linalg::{int, kernel, Rational, SpanBasis, SparseVec};
use crate::slrep::{rank_one, FinModule, VVector};
use crate::tensorrep::{basis_element, ActionStyle, DeRhamComplex, FvElement, TensorModule};
use crate::torusfields::{pair_field, sn_generators, VectorField};
use crate::weyl::{box_points, in_box, MultiIndex, TwistParam};

/// Central bound `B`, generator bound `R`, closure depth `L` and the margin
/// added around the central box.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub bound: i32,
    pub gen_bound: i32,
    pub depth: usize,
    pub margin: i32,
}

impl Window {
    pub fn new(bound: i32, gen_bound: i32, depth: usize, margin: i32) -> Result<Self> {
        if bound < 0 || gen_bound < 0 {
            return Err(Error::Invalid(format!("negative window bound {bound},{gen_bound}")));
        }
        let needed = depth as i32 * gen_bound;
        if margin < needed {
            return Err(Error::MarginViolation { margin, needed });
        }
        Ok(Window { bound, gen_bound, depth, margin })
    }

    /// `B=2, R=2, L=3, margin=6`, with `B=1` from `n = 4` on.
    pub fn default_for(n: usize) -> Self {
        Window { bound: if n >= 4 { 1 } else { 2 }, gen_bound: 2, depth: 3, margin: 6 }
    }

    pub fn ambient_bound(&self) -> i32 {
        self.bound + self.margin
    }

    /// Parses `B,R,L,margin`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!("window needs B,R,L,margin: {s:?}")));
        }
        let num = |x: &str| x.parse::<i32>().map_err(|_| Error::Parse(format!("bad window entry {x:?}")));
        let depth = num(parts[2])?;
        if depth < 0 {
            return Err(Error::Parse(format!("negative depth {depth}")));
        }
        Window::new(num(parts[0])?, num(parts[1])?, depth as usize, num(parts[3])?)
    }
}

impl std::fmt::Display for Window {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{},{},{},{}", self.bound, self.gen_bound, self.depth, self.margin)
    }
}

/// Splits an element into its degree pieces.
pub fn split_by_degree(m: &FvElement) -> BTreeMap<MultiIndex, VVector> {
    let mut parts: BTreeMap<MultiIndex, Vec<(usize, Rational)>> = BTreeMap::new();
    for ((s, k), c) in m.iter() {
        parts.entry(s.clone()).or_default().push((*k, c.clone()));
    }
    parts.into_iter().map(|(s, v)| (s, SparseVec::from_terms(v))).collect()
}

/// A graded subspace of `P ⊗ V`: one subspace of `V` per degree.
#[derive(Clone, Debug)]
pub struct GradedSpan {
    dim: usize,
    pieces: BTreeMap<MultiIndex, SpanBasis<usize>>,
}

impl GradedSpan {
    pub fn new(dim: usize) -> Self {
        GradedSpan { dim, pieces: BTreeMap::new() }
    }

    pub fn v_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.pieces.values().map(SpanBasis::rank).sum()
    }

    pub fn rank_in_box(&self, bound: i32) -> usize {
        self.pieces.iter().filter(|(t, _)| in_box(t, bound)).map(|(_, p)| p.rank()).sum()
    }

    pub fn piece(&self, t: &MultiIndex) -> Option<&SpanBasis<usize>> {
        self.pieces.get(t)
    }

    pub fn degrees(&self) -> impl Iterator<Item = &MultiIndex> + '_ {
        self.pieces.keys()
    }

    pub fn is_full(&self, t: &MultiIndex) -> bool {
        self.pieces.get(t).is_some_and(|p| p.rank() == self.dim)
    }

    pub fn insert(&mut self, t: &MultiIndex, v: &VVector) -> bool {
        if v.is_zero() {
            return false;
        }
        self.pieces.entry(t.clone()).or_default().insert(v)
    }

    pub fn insert_element(&mut self, m: &FvElement) -> usize {
        split_by_degree(m).iter().filter(|(t, v)| self.insert(t, v)).count()
    }

    pub fn contains_piece(&self, t: &MultiIndex, v: &VVector) -> bool {
        v.is_zero() || self.pieces.get(t).is_some_and(|p| p.contains(v))
    }

    /// Membership of a whole element, degree by degree.
    pub fn contains(&self, m: &FvElement) -> bool {
        split_by_degree(m).iter().all(|(t, v)| self.contains_piece(t, v))
    }

    pub fn contains_span(&self, other: &GradedSpan) -> bool {
        other
            .pieces
            .iter()
            .all(|(t, p)| p.rows().iter().all(|v| self.contains_piece(t, v)))
    }

    pub fn same_span(&self, other: &GradedSpan) -> bool {
        self.contains_span(other) && other.contains_span(self)
    }

    /// Flattened rows, in degree order.
    pub fn rows(&self) -> Vec<FvElement> {
        self.pieces
            .iter()
            .flat_map(|(t, p)| p.rows().iter().map(move |v| v.map_keys(|k| (t.clone(), *k))))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    FillsWindow,
    ProperInvariant,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::FillsWindow => "FillsWindow",
            Verdict::ProperInvariant => "ProperInvariant",
            Verdict::Inconclusive => "Inconclusive",
        }
    }
}

/// How a recorded vector arose.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    /// Degree component of seed `seed`.
    Seed { seed: usize },
    /// Generator `generator` applied to record `parent`.
    Image { parent: usize, generator: usize, round: usize },
}

/// One independent vector added to the span, stored unreduced.
#[derive(Clone, Debug)]
pub struct Record {
    pub degree: MultiIndex,
    pub vector: VVector,
    pub origin: Origin,
}

#[derive(Clone, Debug)]
pub struct ClosureResult {
    pub span: GradedSpan,
    pub central_rank: usize,
    pub central_dim: usize,
    pub verdict: Verdict,
    /// Central vectors added by each round (index 0 is the seeds).
    pub central_added: Vec<usize>,
    pub records: Vec<Record>,
}

impl ClosureResult {
    /// One line per record; this is the derivation log.
    pub fn log_lines(&self) -> Vec<String> {
        self.records
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let origin = match &r.origin {
                    Origin::Seed { seed } => format!("seed {seed}"),
                    Origin::Image { parent, generator, round } => format!("round {round} gen {generator} of #{parent}"),
                };
                format!("#{i} {} {} {:?}", r.degree, origin, r.vector)
            })
            .collect()
    }

    /// Re-derives every record from the seeds and generators and checks that
    /// the records span the result.
    pub fn replay(&self, module: &TensorModule, seeds: &[FvElement], gens: &[VectorField]) -> Result<bool> {
        let mut span = GradedSpan::new(module.v().dim());
        for r in &self.records {
            let expected = match &r.origin {
                Origin::Seed { seed } => split_by_degree(&seeds[*seed]).remove(&r.degree).unwrap_or_else(VVector::zero),
                Origin::Image { parent, generator, .. } => {
                    let p = &self.records[*parent];
                    let m = p.vector.map_keys(|k| (p.degree.clone(), *k));
                    let img = module.act_shen(&gens[*generator], &m)?;
                    split_by_degree(&img).remove(&r.degree).unwrap_or_else(VVector::zero)
                }
            };
            if expected != r.vector {
                return Ok(false);
            }
            span.insert(&r.degree, &r.vector);
        }
        Ok(span.same_span(&self.span))
    }
}

/// `D(u,r)` restricted to one degree: the scalar part and the `ruᵀ` columns.
struct GenAction {
    r: MultiIndex,
    u: Vec<Rational>,
    columns: Vec<VVector>,
}

impl GenAction {
    fn new(x: &VectorField, v: &FinModule) -> Result<Self> {
        let mat = rank_one(x.r(), x.u());
        let columns = if x.r().is_zero() {
            vec![VVector::zero(); v.dim()]
        } else {
            (0..v.dim()).map(|k| v.act(&mat, &VVector::unit(k))).collect::<Result<Vec<_>>>()?
        };
        Ok(GenAction { r: x.r().clone(), u: x.u().to_vec(), columns })
    }

    fn apply(&self, twist: &TwistParam, t: &MultiIndex, w: &VVector) -> VVector {
        let scalar = twist.pairing(t, &self.u);
        let mut terms: Vec<(usize, Rational)> = Vec::new();
        for (k, c) in w.iter() {
            if !scalar.is_zero() {
                terms.push((*k, c * &scalar));
            }
            for (k2, y) in self.columns[*k].iter() {
                terms.push((*k2, c * y));
            }
        }
        SparseVec::from_terms(terms)
    }
}

const CHUNK: usize = 2048;

/// Span of the seeds' degree components and everything reachable from them by
/// at most `L` generator applications, truncated to the window. Degrees that
/// can no longer influence the central box are pruned: after round `j` only
/// `Box(B + (L−j)R)` is kept.
pub fn closure(module: &TensorModule, seeds: &[FvElement], gens: &[VectorField], window: &Window) -> Result<ClosureResult> {
    if module.style() != ActionStyle::ShenLarsson {
        return Err(Error::StyleMismatch { module: "LLZ", needed: "ShenLarsson" });
    }
    let n = module.n();
    for g in gens {
        if g.rank() != n {
            return Err(Error::RankMismatch { expected: n, got: g.rank() });
        }
        if g.r().norm() > window.gen_bound {
            return Err(Error::Invalid(format!("generator {g} exceeds bound {}", window.gen_bound)));
        }
        if !g.in_sn() && module.v().id_scalar().is_none() {
            return Err(Error::MissingIdScalar(g.to_string()));
        }
    }
    Window::new(window.bound, window.gen_bound, window.depth, window.margin)?;
    let actions = gens.iter().map(|g| GenAction::new(g, module.v())).collect::<Result<Vec<_>>>()?;
    let twist = module.twist();
    let dim = module.v().dim();
    let b = window.bound;
    let keep = |round: usize| b + (window.depth - round) as i32 * window.gen_bound;

    let mut span = GradedSpan::new(dim);
    let mut records: Vec<Record> = Vec::new();
    let mut frontier = Vec::new();
    let mut central_added = vec![0usize];
    for (i, seed) in seeds.iter().enumerate() {
        for (t, v) in split_by_degree(seed) {
            if !in_box(&t, window.ambient_bound().min(keep(0))) {
                continue;
            }
            if span.insert(&t, &v) {
                if in_box(&t, b) {
                    central_added[0] += 1;
                }
                frontier.push(records.len());
                records.push(Record { degree: t, vector: v, origin: Origin::Seed { seed: i } });
            }
        }
    }

    for round in 1..=window.depth {
        let bound = keep(round);
        let mut tasks: Vec<(usize, usize)> = Vec::new();
        for &f in &frontier {
            let t = &records[f].degree;
            for (g, a) in actions.iter().enumerate() {
                let target = t + &a.r;
                if in_box(&target, bound) && !span.is_full(&target) {
                    tasks.push((f, g));
                }
            }
        }
        let mut next = Vec::new();
        let mut added = 0;
        for chunk in tasks.chunks(CHUNK) {
            let live: Vec<&(usize, usize)> =
                chunk.iter().filter(|(f, g)| !span.is_full(&(&records[*f].degree + &actions[*g].r))).collect();
            let images: Vec<VVector> = live
                .par_iter()
                .map(|(f, g)| actions[*g].apply(twist, &records[*f].degree, &records[*f].vector))
                .collect();
            for ((f, g), img) in live.into_iter().zip(images) {
                let target = &records[*f].degree + &actions[*g].r;
                if span.insert(&target, &img) {
                    if in_box(&target, b) {
                        added += 1;
                    }
                    next.push(records.len());
                    records.push(Record {
                        degree: target,
                        vector: img,
                        origin: Origin::Image { parent: *f, generator: *g, round },
                    });
                }
            }
        }
        central_added.push(added);
        frontier = next;
    }

    let central_rank = span.rank_in_box(b);
    let central_dim = box_points(n, b).len() * dim;
    let verdict = if central_rank == central_dim {
        Verdict::FillsWindow
    } else if window.depth == 0 || central_added.last() == Some(&0) {
        Verdict::ProperInvariant
    } else {
        Verdict::Inconclusive
    };
    Ok(ClosureResult { span, central_rank, central_dim, verdict, central_added, records })
}

/// Random element with 1 to 4 support keys in the central box and
/// coefficients in `{−3,…,3} \ {0}`.
pub fn random_element(rng: &mut ChaCha8Rng, n: usize, dim: usize, bound: i32) -> FvElement {
    loop {
        let support = rng.gen_range(1..=4);
        let terms: Vec<_> = (0..support)
            .map(|_| {
                let s = MultiIndex::new((0..n).map(|_| rng.gen_range(-bound..=bound)));
                let key = rng.gen_range(0..dim);
                let mut c = rng.gen_range(1..=3i64);
                if rng.gen_bool(0.5) {
                    c = -c;
                }
                ((s, key), int(c))
            })
            .collect();
        let m = SparseVec::from_terms(terms);
        if !m.is_zero() {
            return m;
        }
    }
}

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Outcome of repeated closures from random seeds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvidenceReport {
    pub trials: usize,
    pub fills: usize,
    pub proper: usize,
    pub inconclusive: usize,
    pub central_dim: usize,
    pub min_central_rank: usize,
    pub log: Vec<String>,
}

impl EvidenceReport {
    fn new(central_dim: usize) -> Self {
        EvidenceReport {
            trials: 0,
            fills: 0,
            proper: 0,
            inconclusive: 0,
            central_dim,
            min_central_rank: central_dim,
            log: Vec::new(),
        }
    }

    fn record(&mut self, label: &str, seed: &FvElement, res: &ClosureResult) {
        self.trials += 1;
        match res.verdict {
            Verdict::FillsWindow => self.fills += 1,
            Verdict::ProperInvariant => self.proper += 1,
            Verdict::Inconclusive => self.inconclusive += 1,
        }
        self.min_central_rank = self.min_central_rank.min(res.central_rank);
        self.log.push(format!(
            "{label} seed {:?} -> {} rank {}/{} added {:?}",
            seed,
            res.verdict.name(),
            res.central_rank,
            res.central_dim,
            res.central_added
        ));
        self.log.extend(res.log_lines());
    }

    pub fn all_fill(&self) -> bool {
        self.trials > 0 && self.fills == self.trials
    }
}

/// Closures from `trials` random seeds in `𝓕(P,V)`.
pub fn generation_evidence(module: &TensorModule, trials: usize, window: &Window, seed: u64) -> Result<EvidenceReport> {
    let n = module.n();
    let gens = sn_generators(n, window.gen_bound);
    let mut rng = rng_for(seed, 0);
    let dim = module.v().dim();
    let mut report = EvidenceReport::new(box_points(n, window.bound).len() * dim);
    for t in 0..trials {
        let m = random_element(&mut rng, n, dim, window.bound);
        let res = closure(module, std::slice::from_ref(&m), &gens, window)?;
        report.record(&format!("trial {t}"), &m, &res);
    }
    Ok(report)
}

/// Number of exact checks run and how many failed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExactCount {
    pub checks: usize,
    pub failures: usize,
}

impl ExactCount {
    pub fn push(&mut self, ok: bool) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
        }
    }

    pub fn merge(&mut self, other: ExactCount) {
        self.checks += other.checks;
        self.failures += other.failures;
    }

    pub fn ok(&self) -> bool {
        self.failures == 0
    }
}

fn count_all<I: IntoParallelIterator<Item = bool>>(it: I) -> ExactCount {
    let (checks, failures) = it
        .into_par_iter()
        .map(|ok| (1usize, usize::from(!ok)))
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    ExactCount { checks, failures }
}

/// `𝔥X` at degree `t`: the span of the Cartan images of the rows of `piece`.
fn h_piece(module: &TensorModule, t: &MultiIndex, piece: &SpanBasis<usize>) -> Result<SpanBasis<usize>> {
    let mut out = SpanBasis::new();
    for row in piece.rows() {
        let m = row.map_keys(|k| (t.clone(), *k));
        for img in module.cartan_images(&m)? {
            out.insert(&img.map_keys(|(_, k)| *k));
        }
    }
    Ok(out)
}

fn full_piece(dim: usize) -> SpanBasis<usize> {
    SpanBasis::from_vectors((0..dim).map(VVector::unit).collect::<Vec<_>>().iter())
}

/// Report of the `V = Λ⁰` lattice checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeReport {
    pub integral: bool,
    /// `𝕊ₙ·(p⊗1) ⊆ 𝔥𝓕` on window bases.
    pub h_f_inclusion: ExactCount,
    /// `𝕊ₙ·(p⊠1) ⊆ 𝔥𝓛(P,1)` on window bases.
    pub h_l_inclusion: ExactCount,
    pub window_dim: usize,
    pub h_f_rank: usize,
    /// The line `x^λ ⊗ 1` is killed by every generator (integral `λ` only).
    pub fixed_line: Option<ExactCount>,
    pub generation: Option<EvidenceReport>,
}

impl LatticeReport {
    pub fn codim(&self) -> usize {
        self.window_dim - self.h_f_rank
    }
}

pub fn lattice_delta0(twist: &TwistParam, window: &Window, trials: usize, seed: u64) -> Result<LatticeReport> {
    let n = twist.rank();
    let complex = DeRhamComplex::new(twist.clone())?;
    let f0 = complex.module(0, ActionStyle::ShenLarsson);
    let f1 = complex.module(1, ActionStyle::ShenLarsson);
    let gens = sn_generators(n, window.gen_bound);
    let b = window.bound;
    let reach = b + window.gen_bound;

    let one = full_piece(1);
    let mut hf: BTreeMap<MultiIndex, SpanBasis<usize>> = BTreeMap::new();
    let mut hl: BTreeMap<MultiIndex, SpanBasis<usize>> = BTreeMap::new();
    for t in box_points(n, reach) {
        hf.insert(t.clone(), h_piece(&f0, &t, &one)?);
        hl.insert(t.clone(), h_piece(&f1, &t, &complex.l_piece(1, &t)?)?);
    }
    let inside = |pieces: &BTreeMap<MultiIndex, SpanBasis<usize>>, img: &FvElement| {
        split_by_degree(img).iter().all(|(t, v)| pieces.get(t).is_some_and(|p| p.contains(v)))
    };
    let pts = box_points(n, b);
    let pairs: Vec<(&VectorField, &MultiIndex)> = gens.iter().flat_map(|g| pts.iter().map(move |s| (g, s))).collect();
    let h_f_inclusion = count_all(pairs.par_iter().map(|(g, s)| {
        let img = f0.act_shen(g, &basis_element((*s).clone(), 0)).expect("S_n action");
        inside(&hf, &img)
    }));
    let h_l_inclusion = count_all(pairs.par_iter().map(|(g, s)| {
        let bx = complex.d_map(0, &basis_element((*s).clone(), 0)).expect("level 0");
        let img = f1.act_shen(g, &bx).expect("S_n action");
        inside(&hl, &img)
    }));
    let h_f_rank = pts.iter().map(|t| hf[t].rank()).sum();
    let window_dim = pts.len();

    let integral = twist.is_integral();
    let (fixed_line, generation) = if let Some(lam) = twist.as_multi_index() {
        let line = basis_element(lam, 0);
        let mut count = ExactCount::default();
        for g in &gens {
            count.push(f0.act_shen(g, &line)?.is_zero());
        }
        (Some(count), None)
    } else {
        (None, Some(generation_evidence(&f0, trials, window, seed)?))
    };
    Ok(LatticeReport { integral, h_f_inclusion, h_l_inclusion, window_dim, h_f_rank, fixed_line, generation })
}

/// Random nonzero element of `𝓛ₙ(P,k)`: a combination of up to four `xˢ ⊠ w`.
pub fn random_l_element(rng: &mut ChaCha8Rng, complex: &DeRhamComplex, k: usize, bound: i32) -> Result<FvElement> {
    let n = complex.n();
    let dim = complex.exterior(k - 1).dim();
    loop {
        let pre = random_element(rng, n, dim, bound);
        let m = complex.d_map(k - 1, &pre)?;
        if !m.is_zero() {
            return Ok(m);
        }
    }
}

/// Window part of `𝓛ₙ(P,k)`, degree by degree.
pub fn l_window(complex: &DeRhamComplex, k: usize, bound: i32) -> Result<GradedSpan> {
    let mut span = GradedSpan::new(complex.exterior(k).dim());
    for t in box_points(complex.n(), bound) {
        for row in complex.l_piece(k, &t)?.rows() {
            span.insert(&t, row);
        }
    }
    Ok(span)
}

/// Window part of `ker d_k`, degree by degree.
pub fn kernel_window(complex: &DeRhamComplex, k: usize, bound: i32) -> Result<GradedSpan> {
    let dim = complex.exterior(k).dim();
    let mut span = GradedSpan::new(dim);
    for t in box_points(complex.n(), bound) {
        let images = (0..dim)
            .map(|key| complex.d_map(k, &basis_element(t.clone(), key)))
            .collect::<Result<Vec<_>>>()?;
        for v in kernel(&images) {
            span.insert(&t, &v);
        }
    }
    Ok(span)
}

/// Window vectors `y` with `∂ₗ y ∈ 𝓛ₙ(P,k)` for every `l`.
pub fn derivative_criterion_window(complex: &DeRhamComplex, k: usize, bound: i32) -> Result<GradedSpan> {
    let module = complex.module(k, ActionStyle::ShenLarsson);
    let dim = complex.exterior(k).dim();
    let mut span = GradedSpan::new(dim);
    for t in box_points(complex.n(), bound) {
        let l = complex.l_piece(k, &t)?;
        // y ↦ (∂ₗ y mod 𝓛)_l, keyed by (l, V key).
        let mut images = Vec::with_capacity(dim);
        for key in 0..dim {
            let cart = module.cartan_images(&basis_element(t.clone(), key))?;
            let mut terms = Vec::new();
            for (idx, img) in cart.iter().enumerate() {
                let v = l.reduce(&img.map_keys(|(_, k2)| *k2));
                terms.extend(v.into_terms().into_iter().map(|(k2, c)| ((idx, k2), c)));
            }
            images.push(SparseVec::from_terms(terms));
        }
        for v in kernel(&images) {
            span.insert(&t, &v);
        }
    }
    Ok(span)
}

/// Simplicity and maximality evidence for `𝓛ₙ(P,k)` and `𝓛̃ₙ(P,k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalityReport {
    pub l_central_rank: usize,
    pub central_dim: usize,
    /// Closures from random `𝓛` vectors that reached all of `𝓛`'s window part.
    pub simplicity: EvidenceReport,
    /// Every closure row of the simplicity runs stayed inside `𝓛`.
    pub stayed_inside: bool,
    /// Closure of `ker d_k` plus one outside vector.
    pub maximal_fill: Option<Verdict>,
    pub log: Vec<String>,
}

pub fn maximality_evidence(k: usize, twist: &TwistParam, window: &Window, trials: usize, seed: u64) -> Result<MaximalityReport> {
    let n = twist.rank();
    if k == 0 || k > n {
        return Err(Error::LevelOutOfRange { k, lo: 1, hi: n });
    }
    let complex = DeRhamComplex::new(twist.clone())?;
    let module = complex.module(k, ActionStyle::ShenLarsson);
    let gens = sn_generators(n, window.gen_bound);
    let b = window.bound;
    let l_full = l_window(&complex, k, window.ambient_bound())?;
    let l_central_rank = l_full.rank_in_box(b);
    let central_dim = box_points(n, b).len() * module.v().dim();
    let mut rng = rng_for(seed, 1);

    let mut simplicity = EvidenceReport::new(l_central_rank);
    let mut stayed_inside = true;
    for t in 0..trials {
        let m = random_l_element(&mut rng, &complex, k, b)?;
        let res = closure(&module, std::slice::from_ref(&m), &gens, window)?;
        stayed_inside &= l_full.contains_span(&res.span);
        let reached = res.central_rank == l_central_rank;
        simplicity.trials += 1;
        if reached {
            simplicity.fills += 1;
        } else if res.verdict == Verdict::ProperInvariant {
            simplicity.proper += 1;
        } else {
            simplicity.inconclusive += 1;
        }
        simplicity.min_central_rank = simplicity.min_central_rank.min(res.central_rank);
        simplicity.log.push(format!(
            "trial {t} seed {m:?} -> rank {}/{} added {:?}",
            res.central_rank, l_central_rank, res.central_added
        ));
        simplicity.log.extend(res.log_lines());
    }

    let mut log = Vec::new();
    let maximal_fill = if k < n {
        let ker = kernel_window(&complex, k, b)?;
        let outside = loop {
            let m = random_element(&mut rng, n, module.v().dim(), b);
            if !complex.d_map(k, &m)?.is_zero() {
                break m;
            }
        };
        let mut seeds = ker.rows();
        seeds.push(outside.clone());
        let res = closure(&module, &seeds, &gens, window)?;
        log.push(format!(
            "ker d_{k} rank {} + {outside:?} -> {} rank {}/{}",
            ker.rank(),
            res.verdict.name(),
            res.central_rank,
            res.central_dim
        ));
        log.extend(res.log_lines());
        Some(res.verdict)
    } else {
        None
    };
    Ok(MaximalityReport { l_central_rank, central_dim, simplicity, stayed_inside, maximal_fill, log })
}

/// `g·v ∈ 𝓛ₙ(P,k)` for every generator `g` and every basis row `v` of the
/// degree pieces of `𝓛ₙ(P,k)` in the central box; membership is checked in
/// the shifted degree.
pub fn l_invariance(complex: &DeRhamComplex, k: usize, gens: &[VectorField], bound: i32) -> Result<ExactCount> {
    let n = complex.n();
    let module = complex.module(k, ActionStyle::ShenLarsson);
    let reach = bound + gens.iter().map(|g| g.r().norm()).max().unwrap_or(0);
    let mut pieces = BTreeMap::new();
    for t in box_points(n, reach) {
        pieces.insert(t.clone(), complex.l_piece(k, &t)?);
    }
    let l_gens: Vec<FvElement> = box_points(n, bound)
        .iter()
        .flat_map(|t| pieces[t].rows().iter().map(|row| row.map_keys(|key| (t.clone(), *key))))
        .collect();
    let counts = gens
        .par_iter()
        .map(|g| {
            let op = module.shen_operator(g).expect("S_n action");
            let mut c = ExactCount::default();
            for v in &l_gens {
                let img = op.apply(v);
                c.push(split_by_degree(&img).iter().all(|(t, w)| pieces.get(t).is_some_and(|p| p.contains(w))));
            }
            c
        })
        .collect::<Vec<_>>();
    let mut total = ExactCount::default();
    for c in counts {
        total.merge(c);
    }
    Ok(total)
}

/// `g_{i,s}` on every window generator of `𝓛ₙ(P,k)`, all admissible `i`,
/// `|s| ≤ shift_bound`.
pub fn g_vanishing(complex: &DeRhamComplex, k: usize, bound: i32, shift_bound: i32) -> Result<ExactCount> {
    let n = complex.n();
    if n < 3 {
        return Ok(ExactCount::default());
    }
    let l_gens = complex.l_generators(k, bound)?;
    let shifts = box_points(n, shift_bound);
    let jobs: Vec<(usize, &MultiIndex)> = (0..n - 2).flat_map(|i| shifts.iter().map(move |s| (i, s))).collect();
    Ok(jobs
        .par_iter()
        .map(|(i, s)| {
            let mut c = ExactCount::default();
            for v in &l_gens {
                c.push(complex.g_map(k, *i, s, v).expect("admissible i").is_zero());
            }
            c
        })
        .reduce(ExactCount::default, |mut a, b| {
            a.merge(b);
            a
        }))
}

/// Values of a polynomial map `ℤⁿ → 𝓕(P,V)` on a tensor grid of nodes.
#[derive(Clone, Debug)]
pub struct PolyFamily {
    pub degree: usize,
    pub nodes: Vec<Vec<i32>>,
    pub samples: BTreeMap<MultiIndex, FvElement>,
}

impl PolyFamily {
    /// Samples `f` on the grid `nodes[0] × … × nodes[n−1]`.
    pub fn sample<F>(degree: usize, nodes: Vec<Vec<i32>>, f: F) -> Result<Self>
    where
        F: Fn(&MultiIndex) -> Result<FvElement> + Sync,
    {
        let mut points = vec![Vec::new()];
        for axis in &nodes {
            points = points
                .into_iter()
                .flat_map(|p: Vec<i32>| {
                    axis.iter().map(move |&x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        let points: Vec<MultiIndex> = points.into_iter().map(MultiIndex::new).collect();
        let values = points.par_iter().map(&f).collect::<Result<Vec<_>>>()?;
        Ok(PolyFamily { degree, nodes, samples: points.into_iter().zip(values).collect() })
    }

    /// Nodes `{−2,…,d−2}` on every axis: `d+1` distinct integers.
    pub fn default_nodes(n: usize, degree: usize) -> Vec<Vec<i32>> {
        vec![(-2..=degree as i32 - 2).collect(); n]
    }
}

/// Coefficients of `t^e`, `e = 0..m`, in the Lagrange basis polynomial of node `a`.
fn lagrange_coefficients(nodes: &[i32], a: usize) -> Vec<Rational> {
    let mut poly = vec![Rational::one()];
    let mut denom = Rational::one();
    for (b, &z) in nodes.iter().enumerate() {
        if b == a {
            continue;
        }
        let mut next = vec![Rational::zero(); poly.len() + 1];
        for (e, c) in poly.iter().enumerate() {
            next[e + 1] += c;
            next[e] -= c * int(z as i64);
        }
        poly = next;
        denom *= int((nodes[a] - z) as i64);
    }
    poly.into_iter().map(|c| c / &denom).collect()
}

/// Exact coefficient of `r^target` by tensor-grid Lagrange interpolation.
pub fn coeff_extract(family: &PolyFamily, target: &MultiIndex) -> Result<FvElement> {
    let n = family.nodes.len();
    if target.rank() != n {
        return Err(Error::RankMismatch { expected: n, got: target.rank() });
    }
    for axis in &family.nodes {
        let mut sorted = axis.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != axis.len() {
            return Err(Error::Grid(format!("repeated nodes {axis:?}")));
        }
        if axis.len() < family.degree + 1 {
            return Err(Error::Grid(format!("{} nodes for degree {}", axis.len(), family.degree)));
        }
    }
    if target.as_slice().iter().any(|&e| e < 0) {
        return Err(Error::Grid(format!("negative exponent {target}")));
    }
    let weights: Vec<Vec<Rational>> = family
        .nodes
        .iter()
        .enumerate()
        .map(|(i, axis)| {
            let e = target.get(i) as usize;
            (0..axis.len())
                .map(|a| lagrange_coefficients(axis, a).get(e).cloned().unwrap_or_else(Rational::zero))
                .collect()
        })
        .collect();
    let mut out = FvElement::zero();
    for (point, value) in &family.samples {
        let mut w = Rational::one();
        for (i, axis) in family.nodes.iter().enumerate() {
            let a = axis.iter().position(|&z| z == point.get(i)).ok_or_else(|| Error::Grid(format!("stray sample {point}")))?;
            w *= &weights[i][a];
            if w.is_zero() {
                break;
            }
        }
        if !w.is_zero() {
            out = out.add_scaled(&w, value);
        }
    }
    Ok(out)
}

/// The family `r ↦ D_{i+1,s−r} D_{i,r}(m)`, with `D_{i,r}` the field
/// `D(r_{i+1}eᵢ − rᵢe_{i+1}, r)` (0-based `i`, needs `i + 2 < n`).
pub fn ddpw_family(module: &TensorModule, i: usize, s: &MultiIndex, m: &FvElement, nodes: Vec<Vec<i32>>) -> Result<PolyFamily> {
    let n = module.n();
    if i + 2 >= n {
        return Err(Error::IndexOutOfRange { index: i + 3, n });
    }
    PolyFamily::sample(4, nodes, |r| {
        let inner = module.act_shen(&pair_field(i, i + 1, r), m)?;
        module.act_shen(&pair_field(i + 1, i + 2, &(s - r)), &inner)
    })
}

/// Checks that the coefficient of `−rᵢ²` in the family above equals
/// `s_{i+1} g_{i,s}(m) − s_{i+1} Σ_l ∂_l xˢ p ⊗ E_{l,i+2}E_{i,i+1} w` (one-based
/// labels; `s_{i+1}` is the 0-based entry `s[i+1]`).
pub fn ri2_identity(complex: &DeRhamComplex, k: usize, i: usize, s: &MultiIndex, m: &FvElement) -> Result<bool> {
    let n = complex.n();
    let module = complex.module(k, ActionStyle::ShenLarsson);
    let family = ddpw_family(&module, i, s, m, PolyFamily::default_nodes(n, 4))?;
    let coeff = coeff_extract(&family, &MultiIndex::unit(n, i).scaled(2))?.neg();
    let v = complex.exterior(k);
    let shifted = module.act_laurent(s, m);
    let mut tail = Vec::new();
    for ((t, key), c) in shifted.iter() {
        let inner = v.e_act(i, i + 1, &VVector::unit(*key))?;
        for l in 0..n {
            let ev = complex.twist().eigenvalue(t, l);
            if ev.is_zero() {
                continue;
            }
            for (k2, y) in v.e_act(l, i + 2, &inner)?.iter() {
                tail.push(((t.clone(), *k2), c * &ev * y));
            }
        }
    }
    let tail = SparseVec::from_terms(tail);
    let si = int(s.get(i + 1) as i64);
    let expected = complex.g_map(k, i, s, m)?.sub(&tail).scale(&si);
    Ok(coeff == expected)
}

/// Coefficients of total degree above `family.degree` all vanish (needs at
/// least one spare node per axis).
pub fn degree_bounded(family: &PolyFamily) -> Result<bool> {
    let n = family.nodes.len();
    let maxes: Vec<i32> = family.nodes.iter().map(|a| a.len() as i32 - 1).collect();
    let mut exps = vec![Vec::new()];
    for &m in &maxes {
        exps = exps
            .into_iter()
            .flat_map(|p: Vec<i32>| {
                (0..=m).map(move |e| {
                    let mut q = p.clone();
                    q.push(e);
                    q
                })
            })
            .collect();
    }
    for e in exps {
        if e.iter().sum::<i32>() as usize > family.degree {
            let target = MultiIndex::new(e);
            debug_assert_eq!(target.rank(), n);
            if !coeff_extract(family, &target)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Which fingerprint separated two modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoVerdict {
    Equal,
    DistinguishedByLattice,
    DistinguishedByCharacter,
}

impl IsoVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            IsoVerdict::Equal => "EQUAL",
            IsoVerdict::DistinguishedByLattice => "DISTINGUISHED(eigenvalue lattice)",
            IsoVerdict::DistinguishedByCharacter => "DISTINGUISHED(character)",
        }
    }
}

/// Compares `λ mod ℤⁿ` and the `𝔰𝔩ₙ`-character of `V`.
pub fn iso_evidence(a: (&TwistParam, &FinModule), b: (&TwistParam, &FinModule)) -> Result<IsoVerdict> {
    if a.0.rank() != b.0.rank() || a.1.n() != b.1.n() || a.0.rank() != a.1.n() {
        return Err(Error::RankMismatch { expected: a.0.rank(), got: b.0.rank() });
    }
    if a.0.class_mod_integers() != b.0.class_mod_integers() {
        return Ok(IsoVerdict::DistinguishedByLattice);
    }
    if a.1.sl_character() != b.1.sl_character() {
        return Ok(IsoVerdict::DistinguishedByCharacter);
    }
    Ok(IsoVerdict::Equal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::rat;
    use crate::slrep::ModuleKind;
    use crate::weyl::monomial;
    use proptest::prelude::*;
    use rand::Rng;

    fn mi(v: &[i32]) -> MultiIndex {
        MultiIndex::new(v.iter().copied())
    }

    fn shen(twist: TwistParam, kind: ModuleKind) -> TensorModule {
        let n = twist.rank();
        TensorModule::new(twist, FinModule::new(n, kind).unwrap(), ActionStyle::ShenLarsson).unwrap()
    }

    fn generic(n: usize) -> TwistParam {
        TwistParam::from_ratios(&[(1, 2), (1, 3), (1, 5), (2, 7)][..n])
    }

    fn small() -> Window {
        Window::new(1, 1, 2, 2).unwrap()
    }

    #[test]
    fn window_validation() {
        assert!(matches!(Window::new(2, 2, 3, 5), Err(Error::MarginViolation { margin: 5, needed: 6 })));
        assert_eq!(Window::parse("2,2,3,6").unwrap(), Window::default_for(3));
        assert_eq!(Window::default_for(4).bound, 1);
        assert!(Window::parse("2,2,3").is_err());
        assert!(Window::parse("2,2,x,6").is_err());
        assert_eq!(Window::default_for(2).to_string(), "2,2,3,6");
    }

    #[test]
    fn closure_rejects_large_generators() {
        let t = shen(TwistParam::zero(2), ModuleKind::Trivial);
        let gens = sn_generators(2, 2);
        assert!(closure(&t, &[], &gens, &small()).is_err());
    }

    #[test]
    fn trivial_line_is_invariant() {
        let t = shen(TwistParam::zero(2), ModuleKind::Trivial);
        let seed = basis_element(mi(&[0, 0]), 0);
        let res = closure(&t, &[seed], &sn_generators(2, 2), &Window::default_for(2)).unwrap();
        assert_eq!(res.verdict, Verdict::ProperInvariant);
        assert_eq!(res.central_rank, 1);
    }

    #[test]
    fn l_seed_stays_in_l() {
        let c = DeRhamComplex::new(TwistParam::zero(3)).unwrap();
        let t = c.module(2, ActionStyle::ShenLarsson);
        let e = c.exterior(1);
        let seed = c.boxtimes(2, &monomial(mi(&[1, 0, 0])), &VVector::unit(e.index_of(&[1]).unwrap())).unwrap();
        let w = small();
        let res = closure(&t, &[seed], &sn_generators(3, 1), &w).unwrap();
        let l = c.l_span(2, w.ambient_bound()).unwrap();
        assert!(res.span.rows().iter().all(|r| l.contains(r)));
        assert!(res.central_rank > 0 && res.central_rank < res.central_dim);
    }

    #[test]
    fn d0_image_is_proper_in_exterior_one() {
        let c = DeRhamComplex::new(TwistParam::zero(3)).unwrap();
        let t = c.module(1, ActionStyle::ShenLarsson);
        let seed = c.d_map(0, &basis_element(mi(&[1, 0, -1]), 0)).unwrap();
        let res = closure(&t, &[seed], &sn_generators(3, 2), &Window::default_for(3)).unwrap();
        assert_eq!(res.verdict, Verdict::ProperInvariant);
        assert_eq!(*res.central_added.last().unwrap(), 0);
    }

    #[test]
    fn random_symmetric_seed_fills() {
        let t = shen(TwistParam::from_ratios(&[(1, 3), (1, 2)]), ModuleKind::Symmetric(2));
        let r = generation_evidence(&t, 20, &Window::default_for(2), 11).unwrap();
        assert_eq!((r.fills, r.trials), (20, 20));
        assert!(r.all_fill());
    }

    #[test]
    fn adjoint_seeds_fill() {
        let t = shen(generic(3), ModuleKind::Adjoint);
        let r = generation_evidence(&t, 2, &small(), 5).unwrap();
        assert_eq!(r.fills, 2, "{:?}", &r.log[..2]);
    }

    #[test]
    fn closure_replays() {
        let t = shen(generic(2), ModuleKind::Symmetric(2));
        let mut rng = rng_for(3, 0);
        let seeds = vec![random_element(&mut rng, 2, 3, 1), random_element(&mut rng, 2, 3, 1)];
        let gens = sn_generators(2, 1);
        let res = closure(&t, &seeds, &gens, &small()).unwrap();
        assert!(res.replay(&t, &seeds, &gens).unwrap());
        let mut bad = res.clone();
        if let Some(r) = bad.records.iter_mut().find(|r| matches!(r.origin, Origin::Image { .. })) {
            r.vector = r.vector.scale(&int(2));
        }
        assert!(!bad.replay(&t, &seeds, &gens).unwrap());
    }

    #[test]
    fn closure_is_independent_of_worker_count() {
        let t = shen(generic(3), ModuleKind::Symmetric(2));
        let seed = random_element(&mut rng_for(9, 0), 3, 6, 1);
        let gens = sn_generators(3, 1);
        let run = |threads| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| closure(&t, std::slice::from_ref(&seed), &gens, &small()).unwrap().log_lines())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn lattice_integral_and_generic() {
        let r = lattice_delta0(&TwistParam::zero(2), &Window::default_for(2), 10, 1).unwrap();
        assert!(r.integral && r.h_f_inclusion.ok() && r.h_l_inclusion.ok());
        assert_eq!(r.codim(), 1);
        assert!(r.fixed_line.unwrap().ok());

        let r = lattice_delta0(&TwistParam::from_ratios(&[(1, 3), (1, 2)]), &Window::default_for(2), 10, 1).unwrap();
        assert!(!r.integral && r.h_f_inclusion.ok() && r.h_l_inclusion.ok());
        assert_eq!(r.codim(), 0);
        let g = r.generation.unwrap();
        assert_eq!((g.fills, g.trials), (10, 10));

        // λ outside the central box: 𝔥𝓕 fills it even though λ is integral
        let r = lattice_delta0(&TwistParam::from_ratios(&[(5, 1), (0, 1)]), &Window::default_for(2), 0, 1).unwrap();
        assert_eq!(r.codim(), 0);
    }

    #[test]
    fn maximality_examples() {
        let w = small();
        let r = maximality_evidence(2, &generic(3), &w, 3, 2).unwrap();
        assert_eq!(r.simplicity.fills, 3);
        assert!(r.stayed_inside);
        assert_eq!(r.maximal_fill, Some(Verdict::FillsWindow));

        let r = maximality_evidence(2, &TwistParam::zero(3), &w, 3, 2).unwrap();
        assert_eq!(r.simplicity.fills, 3);

        // k = 1, λ = 0: closure from an 𝓛 vector gives 𝔥𝓛, which is all of 𝓛 here
        let r = maximality_evidence(1, &TwistParam::zero(3), &w, 2, 2).unwrap();
        assert_eq!(r.simplicity.fills, 2);
        assert_eq!(r.l_central_rank, 26);
    }

    #[test]
    fn exact_minuscule_checks() {
        for twist in [TwistParam::zero(3), generic(3)] {
            let c = DeRhamComplex::new(twist).unwrap();
            let gens = sn_generators(3, 1);
            for k in 1..=3 {
                assert!(l_invariance(&c, k, &gens, 1).unwrap().ok());
                assert!(g_vanishing(&c, k, 1, 1).unwrap().ok());
            }
            for k in 0..3 {
                let ker = kernel_window(&c, k, 1).unwrap();
                let crit = derivative_criterion_window(&c, k, 1).unwrap();
                assert!(ker.same_span(&crit), "k={k}");
                assert!(ker.contains_span(&l_window(&c, k, 1).unwrap()));
            }
        }
    }

    #[test]
    fn kernel_criterion_distinguishes_levels() {
        let c = DeRhamComplex::new(TwistParam::zero(2)).unwrap();
        let ker0 = kernel_window(&c, 0, 1).unwrap();
        assert_eq!(ker0.rank(), 1);
        let ker1 = kernel_window(&c, 1, 1).unwrap();
        assert_eq!(ker1.rank(), l_window(&c, 1, 1).unwrap().rank() + 2);
    }

    #[test]
    fn interpolation_synthetic() {
        let m0 = basis_element(mi(&[1, 2]), 0).scale(&rat(3, 2));
        let nodes = PolyFamily::default_nodes(2, 4);
        let fam = PolyFamily::sample(4, nodes.clone(), |r| Ok(m0.scale(&int((r.get(0) * r.get(0)) as i64)))).unwrap();
        assert_eq!(coeff_extract(&fam, &mi(&[2, 0])).unwrap(), m0);
        assert!(coeff_extract(&fam, &mi(&[1, 0])).unwrap().is_zero());
        let constant = PolyFamily::sample(4, nodes, |_| Ok(m0.clone())).unwrap();
        for e in [[1, 0], [0, 1], [2, 2], [4, 0]] {
            assert!(coeff_extract(&constant, &mi(&e)).unwrap().is_zero());
        }
        assert_eq!(coeff_extract(&constant, &mi(&[0, 0])).unwrap(), m0);

        let few = PolyFamily::sample(4, vec![vec![0, 1, 2], vec![0, 1, 2]], |_| Ok(m0.clone())).unwrap();
        assert!(matches!(coeff_extract(&few, &mi(&[0, 0])), Err(Error::Grid(_))));
        let rep = PolyFamily::sample(1, vec![vec![0, 0], vec![0, 1]], |_| Ok(m0.clone())).unwrap();
        assert!(matches!(coeff_extract(&rep, &mi(&[0, 0])), Err(Error::Grid(_))));
    }

    #[test]
    fn ddpw_family_has_degree_four() {
        let c = DeRhamComplex::new(generic(3)).unwrap();
        let t = c.module(1, ActionStyle::ShenLarsson);
        let m = basis_element(mi(&[1, -1, 0]), 2);
        let s = mi(&[2, 1, -1]);
        let fam = ddpw_family(&t, 0, &s, &m, vec![(-2..=3).collect(); 3]).unwrap();
        assert!(degree_bounded(&fam).unwrap());
        // a shifted grid gives the same coefficient
        let other = ddpw_family(&t, 0, &s, &m, vec![(-1..=3).collect(); 3]).unwrap();
        let base = ddpw_family(&t, 0, &s, &m, PolyFamily::default_nodes(3, 4)).unwrap();
        let target = mi(&[2, 0, 0]);
        assert_eq!(coeff_extract(&other, &target).unwrap(), coeff_extract(&base, &target).unwrap());
    }

    #[test]
    fn ri2_identity_on_samples() {
        for twist in [TwistParam::zero(3), generic(3)] {
            let c = DeRhamComplex::new(twist).unwrap();
            let mut rng = rng_for(4, 0);
            for k in 1..=3 {
                for _ in 0..2 {
                    let s = MultiIndex::new((0..3).map(|_| rng.gen_range(-2..=2)));
                    let m = random_element(&mut rng, 3, c.exterior(k).dim(), 2);
                    assert!(ri2_identity(&c, k, 0, &s, &m).unwrap());
                }
            }
        }
    }

    #[test]
    fn iso_examples() {
        let lam = TwistParam::from_ratios(&[(1, 3), (1, 2)]);
        let sym = FinModule::new(2, ModuleKind::Symmetric(2)).unwrap();
        let adj = FinModule::new(2, ModuleKind::Adjoint).unwrap();
        assert_eq!(iso_evidence((&lam, &sym), (&lam, &sym)).unwrap(), IsoVerdict::Equal);
        // Sym²ℂ² and 𝔰𝔩₂ are the same 𝔰𝔩₂-module
        assert_eq!(iso_evidence((&lam, &sym), (&lam, &adj)).unwrap(), IsoVerdict::Equal);
        let sym3 = FinModule::new(3, ModuleKind::Symmetric(2)).unwrap();
        let adj3 = FinModule::new(3, ModuleKind::Adjoint).unwrap();
        let lam3d = TwistParam::from_ratios(&[(1, 3), (1, 2), (1, 5)]);
        assert_eq!(iso_evidence((&lam3d, &sym3), (&lam3d, &adj3)).unwrap(), IsoVerdict::DistinguishedByCharacter);
        let lam2 = TwistParam::from_ratios(&[(1, 4), (1, 2)]);
        assert_eq!(iso_evidence((&lam, &sym), (&lam2, &sym)).unwrap(), IsoVerdict::DistinguishedByLattice);
        // twists differing by an integer vector give the same lattice
        let lam3 = TwistParam::from_ratios(&[(4, 3), (-1, 2)]);
        assert_eq!(iso_evidence((&lam, &sym), (&lam3, &sym)).unwrap(), IsoVerdict::Equal);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn deeper_closure_never_shrinks(seed in 0u64..1000, kind in 0usize..3) {
            let kinds = [ModuleKind::Exterior(1), ModuleKind::Symmetric(2), ModuleKind::Trivial];
            let t = shen(TwistParam::zero(2), kinds[kind]);
            let m = random_element(&mut rng_for(seed, 0), 2, t.v().dim(), 1);
            let gens = sn_generators(2, 1);
            let mut last = 0;
            for depth in 0..=3 {
                let w = Window::new(1, 1, depth, 3).unwrap();
                let res = closure(&t, std::slice::from_ref(&m), &gens, &w).unwrap();
                prop_assert!(res.central_rank >= last);
                last = res.central_rank;
            }
            let wide = closure(&t, std::slice::from_ref(&m), &sn_generators(2, 2), &Window::new(1, 2, 3, 6).unwrap()).unwrap();
            prop_assert!(wide.central_rank >= last);
        }

        #[test]
        fn closure_rows_are_words(seed in 0u64..1000) {
            let t = shen(generic(2), ModuleKind::Adjoint);
            let m = random_element(&mut rng_for(seed, 0), 2, 3, 1);
            let gens = sn_generators(2, 1);
            let res = closure(&t, std::slice::from_ref(&m), &gens, &small()).unwrap();
            prop_assert!(res.replay(&t, std::slice::from_ref(&m), &gens).unwrap());
        }
    }
}
