use sn_core::exact_linalg::{rat, SparseVec};
use sn_core::probe::{closure, random_element, rng_for, Verdict, Window};
use sn_core::slrep::{FinModule, ModuleKind};
use sn_core::tensorrep::{basis_element, ActionStyle, DeRhamComplex, TensorModule};
use sn_core::torusfields::{bracket, sn_generators, VectorField};
use sn_core::weyl::{MultiIndex, TwistParam};

fn mi(c: &[i32]) -> MultiIndex {
    MultiIndex::new(c.iter().copied())
}

#[test]
fn operator_matches_single_application() {
    let lam = TwistParam::from_ratios(&[(1, 3), (1, 2), (1, 5)]);
    let t = TensorModule::new(lam, FinModule::new(3, ModuleKind::Adjoint).unwrap(), ActionStyle::ShenLarsson).unwrap();
    let mut rng = rng_for(11, 0);
    for x in sn_generators(3, 1) {
        let op = t.shen_operator(&x).unwrap();
        for _ in 0..3 {
            let m = random_element(&mut rng, 3, t.v().dim(), 2);
            assert_eq!(op.apply(&m), t.act_shen(&x, &m).unwrap());
        }
    }
}

#[test]
fn derivative_commutes_with_action_on_l() {
    // x·(d m) for m ∈ F(P,Λ¹) stays in the image of d, and equals d(x·m).
    let c = DeRhamComplex::new(TwistParam::zero(3)).unwrap();
    let (f1, f2) = (c.module(1, ActionStyle::ShenLarsson), c.module(2, ActionStyle::ShenLarsson));
    let x = VectorField::from_ints(&[1, -1, 0], &[1, 1, 2]);
    let m = SparseVec::from_terms([((mi(&[1, 0, -1]), 0), rat(1, 1)), ((mi(&[0, 2, 0]), 2), rat(-2, 3))]);
    let lhs = f2.act_shen(&x, &c.d_map(1, &m).unwrap()).unwrap();
    assert_eq!(lhs, c.d_map(1, &f1.act_shen(&x, &m).unwrap()).unwrap());
    assert!(c.ltilde_member(2, &lhs).unwrap());
}

#[test]
fn bracket_acts_as_commutator_on_tensor_module() {
    let t = TensorModule::new(TwistParam::zero(2), FinModule::new(2, ModuleKind::Symmetric(3)).unwrap(), ActionStyle::ShenLarsson)
        .unwrap();
    let x = VectorField::from_ints(&[2, -1], &[1, 2]);
    let y = VectorField::from_ints(&[1, 1], &[-1, 1]);
    let m = basis_element(mi(&[0, -1]), 1).add(&basis_element(mi(&[2, 0]), 3));
    let lhs = t.act_shen(&bracket(&x, &y), &m).unwrap();
    let rhs = t.act_shen(&x, &t.act_shen(&y, &m).unwrap()).unwrap().sub(&t.act_shen(&y, &t.act_shen(&x, &m).unwrap()).unwrap());
    assert_eq!(lhs, rhs);
}

#[test]
fn trivial_line_is_proper_and_generic_seed_fills() {
    let t = TensorModule::new(TwistParam::zero(2), FinModule::new(2, ModuleKind::Trivial).unwrap(), ActionStyle::ShenLarsson)
        .unwrap();
    let w = Window::default_for(2);
    let gens = sn_generators(2, w.gen_bound);
    let line = basis_element(MultiIndex::zeros(2), 0);
    let res = closure(&t, std::slice::from_ref(&line), &gens, &w).unwrap();
    assert_eq!(res.verdict, Verdict::ProperInvariant);
    assert_eq!(res.central_rank, 1);
    assert!(res.replay(&t, std::slice::from_ref(&line), &gens).unwrap());

    let sym = TensorModule::new(TwistParam::zero(2), FinModule::new(2, ModuleKind::Symmetric(2)).unwrap(), ActionStyle::ShenLarsson)
        .unwrap();
    let seed = basis_element(mi(&[1, 0]), 0).add(&basis_element(mi(&[0, 1]), 2));
    let res = closure(&sym, std::slice::from_ref(&seed), &gens, &w).unwrap();
    assert_eq!(res.verdict, Verdict::FillsWindow);
    assert_eq!(res.central_rank, sym.window_dim(w.bound));
}

#[test]
fn phi_round_trip_through_llz_module() {
    let v = FinModule::exterior(3, 2).unwrap();
    let lam = TwistParam(v.weight_offset());
    let t = TensorModule::new(TwistParam::from_ratios(&[(1, 2), (0, 1), (2, 3)]), v, ActionStyle::ShenLarsson).unwrap();
    let target = t.phi_target(&lam).unwrap();
    assert_eq!(target.style(), ActionStyle::Llz);
    let m = basis_element(mi(&[3, -1, 0]), 1);
    let image = t.phi_map(&m, &lam).unwrap();
    assert_ne!(image, m);
    assert_eq!(t.phi_inverse(&image, &lam).unwrap(), m);
}
