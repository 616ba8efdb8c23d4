//! Named verification suites.

use std::collections::BTreeMap;

use rand::Rng;
use sn_core::exact_linalg::{int, rat, Rational, SparseVec};
use sn_core::probe::{
    derivative_criterion_window, ddpw_family, degree_bounded, g_vanishing, generation_evidence, iso_evidence,
    kernel_window, l_invariance, l_window, lattice_delta0, maximality_evidence, random_element, ri2_identity,
    rng_for, EvidenceReport, ExactCount, IsoVerdict, PolyFamily, Verdict,
};
use sn_core::slrep::{rank_one, FinModule, ModuleKind};
use sn_core::tensorrep::{basis_element, ActionStyle, DeRhamComplex, TensorModule};
use sn_core::torusfields::{bracket, ddp_identity_check, sn_generators, FieldSum, VectorField};
use sn_core::weyl::{box_points, in_box, shift, LaurentPoly, MultiIndex, TwistParam};

use crate::config::RunConfig;
use crate::report::{Counter, Status};
use crate::CliError;

pub const SUITE_NAMES: [&str; 8] =
    ["identities", "axioms", "derham", "minuscule", "lattice", "nonminuscule", "maximality", "iso"];

/// Every check family and the suite that runs it.
pub const CHECK_REGISTRY: &[(&str, &str)] = &[
    ("bracket_oracle", "identities"),
    ("antisymmetry", "identities"),
    ("jacobi", "identities"),
    ("rank_one", "identities"),
    ("ddp", "identities"),
    ("semidirect", "identities"),
    ("axiom_shen", "axioms"),
    ("axiom_llz", "axioms"),
    ("module_semidirect", "axioms"),
    ("dd_zero", "derham"),
    ("pipi_zero", "derham"),
    ("d_intertwines", "derham"),
    ("phi_intertwines", "derham"),
    ("phi_inverse", "derham"),
    ("square_commutes", "derham"),
    ("g_vanishing", "minuscule"),
    ("g_witness", "minuscule"),
    ("l_invariance", "minuscule"),
    ("l_proper", "minuscule"),
    ("kernel_criterion", "minuscule"),
    ("ri2_identity", "minuscule"),
    ("ddpw_degree", "minuscule"),
    ("h_f_inclusion", "lattice"),
    ("h_l_inclusion", "lattice"),
    ("window_codim", "lattice"),
    ("fixed_line", "lattice"),
    ("generation", "lattice"),
    ("closure_fill", "nonminuscule"),
    ("simplicity", "maximality"),
    ("stayed_inside", "maximality"),
    ("maximal_fill", "maximality"),
    ("iso_same", "iso"),
    ("iso_integer_shift", "iso"),
    ("iso_lattice", "iso"),
    ("iso_character", "iso"),
];

/// What one suite produced, before timing and digesting.
#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub status: Status,
    pub counters: BTreeMap<String, Counter>,
    pub log: Vec<String>,
}

pub fn run_named(name: &str, cfg: &RunConfig) -> Result<SuiteOutcome, CliError> {
    match name {
        "identities" => identities(cfg),
        "axioms" => axioms(cfg),
        "derham" => derham(cfg),
        "minuscule" => minuscule(cfg),
        "lattice" => lattice(cfg),
        "nonminuscule" => nonminuscule(cfg),
        "maximality" => maximality(cfg),
        "iso" => iso(cfg),
        other => Err(CliError::UnknownSuite(other.to_string())),
    }
}

/// Exact check families; any failure fails the suite.
#[derive(Default)]
struct Tally {
    families: BTreeMap<&'static str, ExactCount>,
    log: Vec<String>,
}

impl Tally {
    fn push(&mut self, family: &'static str, ok: bool, what: impl FnOnce() -> String) {
        self.families.entry(family).or_default().push(ok);
        if !ok {
            self.log.push(format!("FAILED {family}: {}", what()));
        }
    }

    fn merge(&mut self, family: &'static str, count: ExactCount, what: impl FnOnce() -> String) {
        self.families.entry(family).or_default().merge(count);
        let line = format!("{family} {}: {}/{} failed", what(), count.failures, count.checks);
        if count.ok() {
            self.log.push(line);
        } else {
            self.log.push(format!("FAILED {line}"));
        }
    }

    fn ok(&self) -> bool {
        self.families.values().all(ExactCount::ok)
    }

    fn counters(&self) -> BTreeMap<String, Counter> {
        let mut out = BTreeMap::new();
        let mut total = ExactCount::default();
        for (name, c) in &self.families {
            out.insert(format!("{name}.checks"), Counter::Int(c.checks as i64));
            out.insert(format!("{name}.failures"), Counter::Int(c.failures as i64));
            total.merge(*c);
        }
        out.insert("checks".into(), Counter::Int(total.checks as i64));
        out.insert("failures".into(), Counter::Int(total.failures as i64));
        out
    }

    fn finish(mut self, extra: BTreeMap<String, Counter>) -> SuiteOutcome {
        let status = if self.ok() { Status::Pass } else { Status::Fail };
        for (name, c) in &self.families {
            self.log.push(format!("{name}: {} checks, {} failures", c.checks, c.failures));
        }
        let mut counters = self.counters();
        counters.extend(extra);
        SuiteOutcome { status, counters, log: self.log }
    }
}

fn random_index<R: Rng>(rng: &mut R, n: usize, bound: i32) -> MultiIndex {
    MultiIndex::new((0..n).map(|_| rng.gen_range(-bound..=bound)))
}

fn random_ints<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Vec<Rational> {
    (0..n).map(|_| int(rng.gen_range(-bound..=bound))).collect()
}

fn random_nonzero<R: Rng>(rng: &mut R) -> Rational {
    let c = rng.gen_range(1..=3i64);
    int(if rng.gen_bool(0.5) { c } else { -c })
}

fn random_poly<R: Rng>(rng: &mut R, n: usize) -> LaurentPoly {
    let terms = rng.gen_range(1..=3);
    SparseVec::from_terms((0..terms).map(|_| (random_index(rng, n, 2), random_nonzero(rng))).collect::<Vec<_>>())
}

/// `D(u,r)` with `|r| ≤ bound`; projected to `(u|r) = 0` when `sn` is set.
fn random_field<R: Rng>(rng: &mut R, n: usize, bound: i32, sn: bool) -> VectorField {
    let r = random_index(rng, n, bound);
    let mut u = random_ints(rng, n, 3);
    if sn && !r.is_zero() {
        let rr = int(r.as_slice().iter().map(|&x| (x * x) as i64).sum());
        let ur = r.dot(&u);
        u = u.iter().enumerate().map(|(i, x)| x * &rr - &ur * int(r.get(i) as i64)).collect();
    }
    VectorField::new(u, r)
}

fn module_zoo(cfg: &RunConfig) -> Result<Vec<FinModule>, CliError> {
    let n = cfg.n;
    let mut v = (0..=n).map(|k| FinModule::exterior(n, k)).collect::<Result<Vec<_>, _>>()?;
    v.push(FinModule::new(n, ModuleKind::Symmetric(2))?);
    v.push(FinModule::new(n, ModuleKind::Adjoint)?);
    v.push(FinModule::new(n, ModuleKind::Natural)?.with_id_scalar(Some(rat(5, 2))));
    v.push(FinModule::new(n, cfg.module)?);
    Ok(v)
}

fn twist_zoo(cfg: &RunConfig) -> Vec<TwistParam> {
    let n = cfg.n;
    vec![
        cfg.lambda.clone(),
        TwistParam::zero(n),
        TwistParam((0..n).map(|i| rat(i as i64 + 1, 3)).collect()),
        TwistParam((0..n).map(|i| int(i as i64 - 1)).collect()),
    ]
}

const INSTANCES: usize = 100;

fn identities(cfg: &RunConfig) -> Result<SuiteOutcome, CliError> {
    let n = cfg.n;
    let tw = &cfg.lambda;
    let mut rng = rng_for(cfg.seed, 10);
    let mut t = Tally::default();
    for _ in 0..INSTANCES {
        let a = random_field(&mut rng, n, 3, false);
        let b = random_field(&mut rng, n, 3, false);
        let c = random_field(&mut rng, n, 3, false);
        let p = random_poly(&mut rng, n);

        let lhs = bracket(&a, &b).apply(&p, tw);
        let rhs = a.apply(&b.apply(&p, tw), tw).sub(&b.apply(&a.apply(&p, tw), tw));
        t.push("bracket_oracle", lhs == rhs, || format!("[{a}, {b}] on {p:?}"));

        let mut sum = FieldSum::new();
        sum.add(&int(1), &bracket(&a, &b));
        sum.add(&int(1), &bracket(&b, &a));
        t.push("antisymmetry", sum.is_zero(), || format!("{a}, {b}"));

        let jac = FieldSum::from_fields(&[
            bracket(&a, &bracket(&b, &c)),
            bracket(&b, &bracket(&c, &a)),
            bracket(&c, &bracket(&a, &b)),
        ]);
        t.push("jacobi", jac.is_zero(), || format!("{a}, {b}, {c}"));

        let v = random_ints(&mut rng, n, 3);
        let uv: Rational = a.u().iter().zip(&v).map(|(x, y)| x * y).sum();
        let expect: Vec<Rational> = a.r().as_slice().iter().map(|&ri| &uv * int(ri as i64)).collect();
        t.push("rank_one", rank_one(a.r(), a.u()).apply(&v) == expect, || format!("{a}, v={v:?}"));

        let s = random_index(&mut rng, n, 3);
        let ok = ddp_identity_check(a.u(), b.u(), a.r(), &s, &p, tw);
        t.push("ddp", ok, || format!("u={:?} v={:?} r={} s={s}", a.u(), b.u(), a.r()));

        let lhs = a.apply(&shift(&p, &s), tw).sub(&shift(&a.apply(&p, tw), &s));
        let rhs = shift(&p, &(a.r() + &s)).scale(&s.dot(a.u()));
        t.push("semidirect", lhs == rhs, || format!("{a}, s={s}"));
    }
    Ok(t.finish(BTreeMap::new()))
}

const AXIOM_INSTANCES: usize = 200;

fn axioms(cfg: &RunConfig) -> Result<SuiteOutcome, CliError> {
    let n = cfg.n;
    let zoo = module_zoo(cfg)?;
    let twists = twist_zoo(cfg);
    let mut rng = rng_for(cfg.seed, 11);
    let mut t = Tally::default();
    for style in [ActionStyle::ShenLarsson, ActionStyle::Llz] {
        let family = match style {
            ActionStyle::ShenLarsson => "axiom_shen",
            ActionStyle::Llz => "axiom_llz",
        };
        for idx in 0..AXIOM_INSTANCES {
            // cycle through every (lambda, V) pair before sampling at random
            let (vi, ti) = if idx < zoo.len() * twists.len() {
                (idx % zoo.len(), idx / zoo.len())
            } else {
                (rng.gen_range(0..zoo.len()), rng.gen_range(0..twists.len()))
            };
            let sn = rng.gen_bool(0.5);
            let x = random_field(&mut rng, n, 2, sn);
            let y = random_field(&mut rng, n, 2, sn);
            let module = TensorModule::new(twists[ti].clone(), zoo[vi].clone(), style)?;
            let m = random_element(&mut rng, n, module.v().dim(), 2);
            let lhs = module.act(&bracket(&x, &y), &m)?;
            let rhs = module.act(&x, &module.act(&y, &m)?)?.sub(&module.act(&y, &module.act(&x, &m)?)?);
            t.push(family, lhs == rhs, || format!("V={} X={x} Y={y}", zoo[vi].kind()));
        }
    }
    for _ in 0..INSTANCES {
        let vi = rng.gen_range(0..zoo.len());
        let ti = rng.gen_range(0..twists.len());
        let module = TensorModule::new(twists[ti].clone(), zoo[vi].clone(), ActionStyle::ShenLarsson)?;
        let x = random_field(&mut rng, n, 2, false);
        let s = random_index(&mut rng, n, 2);
        let m = random_element(&mut rng, n, module.v().dim(), 2);
        let lhs = module.act_shen(&x, &module.act_laurent(&s, &m))?.sub(&module.act_laurent(&s, &module.act_shen(&x, &m)?));
        let rhs = module.act_laurent(&(x.r() + &s), &m).scale(&s.dot(x.u()));
        t.push("module_semidirect", lhs == rhs, || format!("V={} X={x} s={s}", zoo[vi].kind()));
    }
    Ok(t.finish(BTreeMap::new()))
}

fn derham(cfg: &RunConfig) -> Result<SuiteOutcome, CliError> {
    let n = cfg.n;
    let b = cfg.window.bound;
    let complex = DeRhamComplex::new(cfg.lambda.clone())?;
    let zero = TwistParam::zero(n);
    let mut t = Tally::default();
    let mut window_dims = 0usize;
    for k in 0..=n {
        let module = complex.module(k, ActionStyle::ShenLarsson);
        let basis = module.window_basis(b);
        window_dims += basis.len();
        if k < n {
            let target = complex.module(k + 1, ActionStyle::ShenLarsson);
            let mut dd = ExactCount::default();
            let mut pp = ExactCount::default();
            let mut sq = ExactCount::default();
            for e in &basis {
                let d = complex.d_map(k, e)?;
                let p = complex.pi_map(k, e)?;
                if k + 1 < n {
                    dd.push(complex.d_map(k + 1, &d)?.is_zero());
                    pp.push(complex.pi_map(k + 1, &p)?.is_zero());
                }
                sq.push(target.phi_map(&d, &zero)? == complex.pi_map(k, &module.phi_map(e, &zero)?)?);
            }
            if k + 1 < n {
                t.merge("dd_zero", dd, || format!("k={k}"));
                t.merge("pipi_zero", pp, || format!("k={k}"));
            }
            t.merge("square_commutes", sq, || format!("k={k}"));
        }
    }

    let mut rng = rng_for(cfg.seed, 12);
    for _ in 0..INSTANCES {
        let k = rng.gen_range(0..n);
        let (m0, m1) = (complex.module(k, ActionStyle::ShenLarsson), complex.module(k + 1, ActionStyle::ShenLarsson));
        let x = random_field(&mut rng, n, 2, false);
        let m = random_element(&mut rng, n, m0.v().dim(), b.max(1));
        let lhs = complex.d_map(k, &m0.act_shen(&x, &m)?)?;
        let rhs = m1.act_shen(&x, &complex.d_map(k, &m)?)?;
        t.push("d_intertwines", lhs == rhs, || format!("k={k} X={x}"));
    }

    let mut phi_modules = (0..=n).map(|k| FinModule::exterior(n, k)).collect::<Result<Vec<_>, _>>()?;
    phi_modules.push(FinModule::new(n, cfg.module)?);
    for _ in 0..INSTANCES {
        let v = phi_modules[rng.gen_range(0..phi_modules.len())].clone();
        let lam = TwistParam(v.weight_offset());
        let module = TensorModule::new(cfg.lambda.clone(), v, ActionStyle::ShenLarsson)?;
        let target = module.phi_target(&lam)?;
        let x = VectorField::monomial(rng.gen_range(0..n), random_index(&mut rng, n, 2));
        let m = random_element(&mut rng, n, module.v().dim(), b.max(1));
        let image = module.phi_map(&m, &lam)?;
        let lhs = module.phi_map(&module.act_shen(&x, &m)?, &lam)?;
        let rhs = target.act_llz_field(&x, &image)?;
        t.push("phi_intertwines", lhs == rhs, || format!("V={} X={x}", module.v().kind()));
        t.push("phi_inverse", module.phi_inverse(&image, &lam)? == m, || format!("V={}", module.v().kind()));
    }
    let mut extra = BTreeMap::new();
    extra.insert("windowDim".into(), Counter::Int(window_dims as i64));
    Ok(t.finish(extra))
}

/// `x^{e₃} ⊗ e₂` in `𝓕(P, Λ¹)` for `λ = 0`: outside `𝓛ₙ(P,1)` and not killed by `g_{1,0}`.
fn g_witness(n: usize, t: &mut Tally) -> Result<(), CliError> {
    let complex = DeRhamComplex::new(TwistParam::zero(n))?;
    let deg = MultiIndex::unit(n, 2);
    let w = basis_element(deg.clone(), 1);
    let outside = !complex.l_piece(1, &deg)?.contains(&SparseVec::unit(1));
    let g = complex.g_map(1, 0, &MultiIndex::zeros(n), &w)?;
    t.push("g_witness", outside && !g.is_zero(), || format!("g = {g:?}, outside = {outside}"));
    Ok(())
}

fn minuscule(cfg: &RunConfig) -> Result<SuiteOutcome, CliError> {
    let n = cfg.n;
    let b = cfg.window.bound;
    let complex = DeRhamComplex::new(cfg.lambda.clone())?;
    let gens = sn_generators(n, cfg.window.gen_bound);
    let mut t = Tally::default();
    let levels: Vec<usize> = match cfg.k {
        Some(k) => vec![k],
        None => (1..n).collect(),
    };

    if n >= 3 {
        for k in 1..=n {
            t.merge("g_vanishing", g_vanishing(&complex, k, b, 2)?, || format!("k={k}"));
        }
        g_witness(n, &mut t)?;
    }
    for &k in levels.iter().filter(|&&k| k >= 1) {
        t.merge("l_invariance", l_invariance(&complex, k, &gens, b)?, || format!("k={k}"));
        let l = l_window(&complex, k, b)?;
        let dim = box_points(n, b).len() * complex.exterior(k).dim();
        let rank = l.rank_in_box(b);
        t.push("l_proper", rank < dim, || format!("k={k} rank {rank} of {dim}"));
        t.log.push(format!("L(P,{k}) window rank {rank} of {dim}"));
    }
    for k in 0..n {
        let ker = kernel_window(&complex, k, b)?;
        let crit = derivative_criterion_window(&complex, k, b)?;
        t.push("kernel_criterion", ker.same_span(&crit), || format!("k={k} ranks {} vs {}", ker.rank(), crit.rank()));
    }
    if n >= 3 {
        let mut rng = rng_for(cfg.seed, 13);
        for idx in 0..20 {
            let k = rng.gen_range(1..=n);
            let i = rng.gen_range(0..n - 2);
            let s = random_index(&mut rng, n, 2);
            let m = random_element(&mut rng, n, complex.exterior(k).dim(), 1);
            t.push("ri2_identity", ri2_identity(&complex, k, i, &s, &m)?, || format!("k={k} i={i} s={s} m={m:?}"));
            if idx < 3 {
                let module = complex.module(k, ActionStyle::ShenLarsson);
                let fam = ddpw_family(&module, i, &s, &m, PolyFamily::default_nodes(n, 5))?;
                t.push("ddpw_degree", degree_bounded(&fam)?, || format!("k={k} i={i} s={s}"));
            }
        }
    }
    Ok(t.finish(BTreeMap::new()))
}

fn evidence_counters(e: &EvidenceReport, out: &mut BTreeMap<String, Counter>, prefix: &str) {
    out.insert(format!("{prefix}trials"), Counter::Int(e.trials as i64));
    out.insert(format!("{prefix}fills"), Counter::Int(e.fills as i64));
    out.insert(format!("{prefix}proper"), Counter::Int(e.proper as i64));
    out.insert(format!("{prefix}inconclusive"), Counter::Int(e.inconclusive as i64));
    out.insert(format!("{prefix}centralDim"), Counter::Int(e.central_dim as i64));
    out.insert(format!("{prefix}minCentralRank"), Counter::Int(e.min_central_rank as i64));
}

const TRIALS: usize = 10;

fn lattice(cfg: &RunConfig) -> Result<SuiteOutcome, CliError> {
    let rep = lattice_delta0(&cfg.lambda, &cfg.window, TRIALS, cfg.seed)?;
    let mut t = Tally::default();
    t.merge("h_f_inclusion", rep.h_f_inclusion, || "S_n(p x 1) in hF".into());
    t.merge("h_l_inclusion", rep.h_l_inclusion, || "S_n(p box 1) in hL".into());
    let expected = match cfg.lambda.as_multi_index() {
        Some(lam) if in_box(&lam, cfg.window.bound) => 1,
        _ => 0,
    };
    t.push("window_codim", rep.codim() == expected, || format!("codim {} expected {expected}", rep.codim()));
    if let Some(c) = rep.fixed_line {
        t.merge("fixed_line", c, || "x^lambda x 1".into());
    }
    let mut extra = BTreeMap::new();
    extra.insert("windowDim".into(), Counter::Int(rep.window_dim as i64));
    extra.insert("hRank".into(), Counter::Int(rep.h_f_rank as i64));
    extra.insert("codim".into(), Counter::Int(rep.codim() as i64));
    let generation = rep.generation.clone();
    if let Some(e) = &generation {
        evidence_counters(e, &mut extra, "generation.");
        t.log.extend(e.log.iter().cloned());
    }
    let mut out = t.finish(extra);
    if let Some(e) = generation {
        out.log.push(format!("generation: {}/{} fill", e.fills, e.trials));
        out.status = match out.status {
            Status::Pass if e.all_fill() => Status::EvidencePass,
            _ => Status::Fail,
        };
    }
    Ok(out)
}

fn nonminuscule(cfg: &RunConfig) -> Result<SuiteOutcome, CliError> {
    if cfg.module.is_minuscule(cfg.n) {
        return Err(CliError::Invalid(format!("nonminuscule suite needs a nonminuscule module, got {}", cfg.module)));
    }
    let module = TensorModule::new(cfg.lambda.clone(), FinModule::new(cfg.n, cfg.module)?, ActionStyle::ShenLarsson)?;
    let e = generation_evidence(&module, TRIALS, &cfg.window, cfg.seed)?;
    let mut counters = BTreeMap::new();
    evidence_counters(&e, &mut counters, "closure_fill.");
    let mut log = e.log.clone();
    log.push(format!("closure_fill: {}/{} fill, {} proper, {} inconclusive", e.fills, e.trials, e.proper, e.inconclusive));
    let status = if e.all_fill() { Status::EvidencePass } else { Status::Fail };
    Ok(SuiteOutcome { status, counters, log })
}

fn maximality(cfg: &RunConfig) -> Result<SuiteOutcome, CliError> {
    let k = cfg.k.unwrap_or(2.min(cfg.n));
    let rep = maximality_evidence(k, &cfg.lambda, &cfg.window, TRIALS, cfg.seed)?;
    let mut counters = BTreeMap::new();
    evidence_counters(&rep.simplicity, &mut counters, "simplicity.");
    counters.insert("k".into(), Counter::Int(k as i64));
    counters.insert("lCentralRank".into(), Counter::Int(rep.l_central_rank as i64));
    counters.insert("centralDim".into(), Counter::Int(rep.central_dim as i64));
    counters.insert("stayed_inside".into(), Counter::Int(i64::from(rep.stayed_inside)));
    if let Some(v) = rep.maximal_fill {
        counters.insert("maximal_fill".into(), Counter::Text(v.name().to_string()));
    }
    let mut log = rep.simplicity.log.clone();
    log.extend(rep.log.iter().cloned());
    log.push(format!(
        "simplicity: {}/{} reach L, stayed inside: {}",
        rep.simplicity.fills, rep.simplicity.trials, rep.stayed_inside
    ));
    let ok = rep.simplicity.all_fill()
        && rep.stayed_inside
        && rep.maximal_fill.is_none_or(|v| v == Verdict::FillsWindow);
    let status = if ok { Status::EvidencePass } else { Status::Fail };
    Ok(SuiteOutcome { status, counters, log })
}

fn iso(cfg: &RunConfig) -> Result<SuiteOutcome, CliError> {
    let n = cfg.n;
    let v = FinModule::new(n, cfg.module)?;
    let lam = &cfg.lambda;
    let mut t = Tally::default();
    let check = |t: &mut Tally, family: &'static str, other: (&TwistParam, &FinModule), want: IsoVerdict| -> Result<(), CliError> {
        let got = iso_evidence((lam, &v), other)?;
        t.log.push(format!("{family}: ({}, {}) -> {}", fmt_twist(other.0), other.1.kind(), got.name()));
        t.push(family, got == want, || format!("expected {}", want.name()));
        Ok(())
    };
    check(&mut t, "iso_same", (lam, &v), IsoVerdict::Equal)?;
    let mut shifted = lam.clone();
    shifted.0[0] += int(1);
    check(&mut t, "iso_integer_shift", (&shifted, &v), IsoVerdict::Equal)?;
    let mut halved = lam.clone();
    halved.0[0] += rat(1, 2);
    check(&mut t, "iso_lattice", (&halved, &v), IsoVerdict::DistinguishedByLattice)?;
    let candidates = [ModuleKind::Adjoint, ModuleKind::Symmetric(2), ModuleKind::Symmetric(3), ModuleKind::Natural];
    let fingerprint = v.sl_character();
    for kind in candidates {
        let w = FinModule::new(n, kind)?;
        if w.sl_character() != fingerprint {
            check(&mut t, "iso_character", (lam, &w), IsoVerdict::DistinguishedByCharacter)?;
            break;
        }
    }
    Ok(t.finish(BTreeMap::new()))
}

fn fmt_twist(t: &TwistParam) -> String {
    t.0.iter().map(sn_core::exact_linalg::format_rational).collect::<Vec<_>>().join(",")
}
