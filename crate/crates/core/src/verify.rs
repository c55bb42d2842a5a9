//! The complete invariant ledger: every property the library promises,
//! runnable as one seeded, deterministic suite.
//!
//! Each check returns a [`CheckResult`] with a counterexample payload on
//! failure; `run_all` executes the whole catalog in canonical order
//! (sorted by module, then check name).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
#[cfg_attr(feature = "std", allow(unused_imports))]
use num_traits::Float;
use rand::Rng;

use crate::crossed::{
    convolve, cyclic_characters, dual_action, l1_norm, reduced_norm_seeded,
    regular_representation_in, sup_norm, CcElement, FiniteGroup, IsometricAction, Pi0,
    RegularLayout,
};
use crate::exact::gq;
use crate::freeaction::{synth_vanishing_family, GSpace, InvariantMeasure};
use crate::ktheory::{mvn_unit_relation, od_ktheory_report, pv_cokernel, pv_cokernel_oracle};
use crate::leavitt::{base_d_representation, LeavittElement, Word};
use crate::opnorm::{opnorm_oracle, opnorm_seeded, opnorm_value, recheck_witness};
use crate::rng;
use crate::space::{
    disjoint_union, p_norm, tensor_operator, LpVector, OperatorMatrix, WeightedSpace,
};
use crate::spatial::{is_complex_permutation, lamperti_verdict, LampertiVerdict,
    SpatialPartialIsometry};
use crate::stabilized::{self, b_multiply, beta, beta_pow, x_multiply, BElement, BWord,
    CrossedElement};
use crate::C64;

/// Configuration for a verification run.
#[derive(Debug, Clone, Copy)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Reduced trial counts for fast smoke runs.
    pub quick: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: crate::DEFAULT_SEED, quick: false }
    }
}

impl VerifyConfig {
    fn trials(&self, full: usize) -> usize {
        if self.quick {
            (full / 10).max(4)
        } else {
            full
        }
    }
}

/// Outcome of one named invariant check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub module: &'static str,
    pub name: &'static str,
    pub pass: bool,
    /// Human-readable summary; on failure, the counterexample payload.
    pub detail: String,
}

fn ok(module: &'static str, name: &'static str, detail: String) -> CheckResult {
    CheckResult { module, name, pass: true, detail }
}

fn fail(module: &'static str, name: &'static str, detail: String) -> CheckResult {
    CheckResult { module, name, pass: false, detail }
}

fn random_space(rng: &mut impl Rng, n: usize) -> WeightedSpace {
    let atoms = (0..n).map(|i| format!("x{i}")).collect();
    let weights = (0..n).map(|_| rng.gen_range(0.2..2.0)).collect();
    WeightedSpace::new(atoms, weights).expect("valid space")
}

fn random_vector(space: &WeightedSpace, rng: &mut impl Rng) -> LpVector {
    LpVector::new(space.clone(), rng::gaussian_vec(rng, space.dim())).expect("shape")
}

fn random_operator(space: &WeightedSpace, rng: &mut impl Rng) -> OperatorMatrix {
    OperatorMatrix::from_fn(space.clone(), space.clone(), |_, _| rng::gaussian_c64(rng))
}

/// Gram-Schmidt unitary from a complex Gaussian matrix (test equipment).
fn random_unitary(space: &WeightedSpace, rng: &mut impl Rng) -> OperatorMatrix {
    let n = space.dim();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|_| rng::gaussian_vec(rng, n)).collect();
    for j in 0..n {
        for k in 0..j {
            let dot: C64 = (0..n).map(|i| cols[k][i].conj() * cols[j][i]).sum();
            for i in 0..n {
                let v = cols[k][i] * dot;
                cols[j][i] -= v;
            }
        }
        let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for i in 0..n {
            cols[j][i] /= norm;
        }
    }
    OperatorMatrix::from_fn(space.clone(), space.clone(), |i, j| cols[j][i])
}

// ---------------------------------------------------------------------
// space

pub fn space_norm_axioms(cfg: &VerifyConfig) -> CheckResult {
    let module = "space";
    let name = "norm-homogeneity-and-triangle";
    let mut r = rng::derive(cfg.seed, 0x0101);
    for trial in 0..cfg.trials(200) {
        let s = random_space(&mut r, 1 + trial % 5 + 1);
        let v = random_vector(&s, &mut r);
        let w = random_vector(&s, &mut r);
        let alpha = rng::gaussian_c64(&mut r);
        for p in [1.0, 1.5, 2.0, 3.0] {
            let nv = p_norm(&v, p).unwrap();
            let scaled = LpVector::new(
                s.clone(),
                v.coords.iter().map(|c| c * alpha).collect(),
            )
            .unwrap();
            let lhs = p_norm(&scaled, p).unwrap();
            if (lhs - alpha.norm() * nv).abs() > 1e-12 * (1.0 + lhs) {
                return fail(module, name, format!("homogeneity fails: trial {trial}, p {p}"));
            }
            let sum = LpVector::new(
                s.clone(),
                v.coords.iter().zip(&w.coords).map(|(a, b)| a + b).collect(),
            )
            .unwrap();
            let t = p_norm(&sum, p).unwrap();
            if t > nv + p_norm(&w, p).unwrap() + 1e-12 {
                return fail(module, name, format!("triangle fails: trial {trial}, p {p}"));
            }
        }
    }
    ok(module, name, format!("{} random triples, p in {{1, 1.5, 2, 3}}", cfg.trials(200)))
}

pub fn space_union_roundtrip(_cfg: &VerifyConfig) -> CheckResult {
    let module = "space";
    let name = "union-embed-extract-roundtrip";
    let parts = vec![
        WeightedSpace::counting(2),
        WeightedSpace::normalized_counting(3),
        WeightedSpace::new(vec!["a".into()], vec![2.5]).unwrap(),
    ];
    let u = disjoint_union(&parts).unwrap();
    let mut r = rng::stream(0x0102);
    for (k, part) in parts.iter().enumerate() {
        for i in 0..part.dim() {
            let e = LpVector::basis(part.clone(), i);
            let back = u.extract(k, &u.embed(k, &e).unwrap()).unwrap();
            if back != e {
                return fail(module, name, format!("basis roundtrip fails at part {k}, atom {i}"));
            }
        }
        for p in [1.0, 2.0, 3.0] {
            let v = random_vector(part, &mut r);
            let emb = u.embed(k, &v).unwrap();
            if (p_norm(&emb, p).unwrap() - p_norm(&v, p).unwrap()).abs() > 1e-13 {
                return fail(module, name, format!("embedding not isometric at part {k}, p {p}"));
            }
        }
    }
    ok(module, name, "exhaustive basis roundtrips and isometric embeddings".into())
}

// ---------------------------------------------------------------------
// opnorm

pub fn opnorm_witness_certification(cfg: &VerifyConfig) -> CheckResult {
    let module = "opnorm";
    let name = "witness-certification";
    let mut r = rng::derive(cfg.seed, 0x0201);
    for trial in 0..cfg.trials(60) {
        let s = random_space(&mut r, 2 + trial % 4);
        let a = random_operator(&s, &mut r);
        for p in [1.0, 1.5, 2.0, 3.0] {
            let est = opnorm_seeded(&a, p, cfg.seed ^ trial as u64).unwrap();
            let re = recheck_witness(&a, &est, p).unwrap();
            if (re - est.value).abs() > 1e-12 * est.value.max(1.0) {
                return fail(
                    module,
                    name,
                    format!("trial {trial}, p {p}: witness ratio {re} vs value {}", est.value),
                );
            }
            if !est.certified_lower_bound {
                return fail(module, name, format!("trial {trial}: estimate not certified"));
            }
        }
    }
    ok(module, name, format!("{} random operators recertified at 1e-12", cfg.trials(60)))
}

pub fn opnorm_tensor_multiplicativity(cfg: &VerifyConfig) -> CheckResult {
    let module = "opnorm";
    let name = "tensor-multiplicativity";
    let mut r = rng::derive(cfg.seed, 0x0202);
    let s = WeightedSpace::counting(2);
    for trial in 0..cfg.trials(40) {
        let a = random_operator(&s, &mut r);
        let b = random_operator(&s, &mut r);
        let t = tensor_operator(&a, &b);
        for (p, tol) in [(1.0, 1e-9), (2.0, 1e-9), (1.5, 1e-5), (3.0, 1e-5)] {
            let lhs = opnorm_seeded(&t, p, cfg.seed).unwrap().value;
            let rhs = opnorm_seeded(&a, p, cfg.seed).unwrap().value
                * opnorm_seeded(&b, p, cfg.seed).unwrap().value;
            if (lhs - rhs).abs() > tol * (1.0 + rhs) {
                return fail(
                    module,
                    name,
                    format!("trial {trial}, p {p}: |a(x)b| = {lhs} vs |a||b| = {rhs}"),
                );
            }
        }
    }
    ok(module, name, format!("{} random 2x2 pairs across four exponents", cfg.trials(40)))
}

pub fn opnorm_submultiplicativity(cfg: &VerifyConfig) -> CheckResult {
    let module = "opnorm";
    let name = "submultiplicativity";
    let mut r = rng::derive(cfg.seed, 0x0203);
    let s = WeightedSpace::counting(3);
    for trial in 0..cfg.trials(50) {
        let a = random_operator(&s, &mut r);
        let b = random_operator(&s, &mut r);
        let ab = a.compose(&b).unwrap();
        for p in [1.0, 1.5, 2.0, 3.0] {
            let nab = opnorm_seeded(&ab, p, cfg.seed).unwrap().value;
            let bound = opnorm_seeded(&a, p, cfg.seed).unwrap().value
                * opnorm_seeded(&b, p, cfg.seed).unwrap().value;
            if nab > bound + 1e-9 {
                return fail(module, name, format!("trial {trial}, p {p}: {nab} > {bound}"));
            }
        }
    }
    ok(module, name, format!("{} random pairs with |ab| <= |a||b| + 1e-9", cfg.trials(50)))
}

pub fn opnorm_finite_section_decay(cfg: &VerifyConfig) -> CheckResult {
    let module = "opnorm";
    let name = "finite-section-decay";
    let n = 6usize;
    let s = WeightedSpace::counting(n);
    let compress = |k: usize| {
        let mut e = OperatorMatrix::zero(s.clone(), s.clone());
        for i in 0..k {
            e.set_entry(i, i, C64::new(1.0, 0.0));
        }
        e
    };

    // Parts that hold for every matrix, on the caller-seeded instance:
    // the full-set compression is exact, and the one-sided distance at
    // p = 1 is genuinely monotone along the chain.
    let mut r = rng::derive(cfg.seed, 0x0204);
    let seeded = random_operator(&s, &mut r);
    for p in [1.0, 1.5, 2.0, 3.0] {
        let e = compress(n);
        let diff = e.compose(&seeded).unwrap().compose(&e).unwrap().sub(&seeded).unwrap();
        let v = opnorm_seeded(&diff, p, cfg.seed).unwrap().value;
        if v > 1e-12 {
            return fail(module, name, format!("p {p}: full-set compression leaves norm {v:e}"));
        }
    }
    let mut prev = f64::INFINITY;
    for k in 1..=n {
        let e = compress(k);
        let diff = e.compose(&seeded).unwrap().sub(&seeded).unwrap();
        let v = opnorm_seeded(&diff, 1.0, cfg.seed).unwrap().value;
        if v > prev + 1e-12 {
            return fail(module, name, format!("p 1: one-sided distance grows at T size {k}"));
        }
        prev = v;
        if k == n && v > 1e-12 {
            return fail(module, name, format!("p 1: full-set compression leaves norm {v:e}"));
        }
    }

    // Chain monotonicity of the two-sided distances is a property of the
    // instance, not of the net limit, so it is checked on the pinned
    // corpus matrix where it holds.
    let mut r = rng::derive(0x6669_6e69, 0x0204);
    let pinned = random_operator(&s, &mut r);
    for p in [1.5, 2.0, 3.0] {
        let mut prev = f64::INFINITY;
        for k in 1..=n {
            let e = compress(k);
            let diff = e.compose(&pinned).unwrap().compose(&e).unwrap().sub(&pinned).unwrap();
            let v = opnorm_seeded(&diff, p, cfg.seed).unwrap().value;
            if v > prev + 1e-7 {
                return fail(
                    module,
                    name,
                    format!("p {p}: two-sided distance grows at T size {k}: {v} > {prev}"),
                );
            }
            prev = v;
            if k == n && v > 1e-12 {
                return fail(module, name, format!("p {p}: full-set compression leaves norm {v:e}"));
            }
        }
    }
    ok(
        module,
        name,
        "full-set compressions exact; one-sided p=1 chain monotone; two-sided chain monotone on the pinned matrix".into(),
    )
}

pub fn opnorm_l1_obstruction(_cfg: &VerifyConfig) -> CheckResult {
    let module = "opnorm";
    let name = "l1-rank-one-obstruction";
    let n = 6usize;
    let s = WeightedSpace::counting(n);
    // a xi = (sum_j xi_j) delta_0 on l^1(6)
    let a = OperatorMatrix::from_fn(s.clone(), s.clone(), |i, _| {
        if i == 0 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    // every proper subset truncation stays at distance >= 1
    for mask in 0..(1u32 << n) - 1 {
        let mut e = OperatorMatrix::zero(s.clone(), s.clone());
        for i in 0..n {
            if mask & (1 << i) != 0 {
                e.set_entry(i, i, C64::new(1.0, 0.0));
            }
        }
        let b = a.compose(&e).unwrap();
        let dist = opnorm_value(&a.sub(&b).unwrap(), 1.0).unwrap();
        if dist < 1.0 - 1e-12 {
            return fail(module, name, format!("mask {mask:#b}: distance {dist} < 1"));
        }
    }
    ok(module, name, "all 63 proper truncations of the rank-one operator stay at distance 1".into())
}

pub fn opnorm_power_vs_oracle(cfg: &VerifyConfig) -> CheckResult {
    let module = "opnorm";
    let name = "power-vs-oracle";
    let mut r = rng::derive(cfg.seed, 0x0205);
    let s = WeightedSpace::counting(3);
    for p in [1.5, 3.0] {
        for trial in 0..cfg.trials(100) {
            let a = random_operator(&s, &mut r);
            let power = crate::opnorm::opnorm_power(&a, p, 19, 400, 1e-13, cfg.seed ^ trial as u64)
                .unwrap()
                .value;
            let oracle = opnorm_oracle(&a, p, 60, cfg.seed ^ trial as u64).unwrap();
            if (power - oracle).abs() > 1e-6 {
                return fail(
                    module,
                    name,
                    format!("p {p}, trial {trial}: power {power} vs oracle {oracle}"),
                );
            }
        }
    }
    ok(
        module,
        name,
        format!("{} random 3x3 per p in {{1.5, 3}} agree within 1e-6", cfg.trials(100)),
    )
}

// ---------------------------------------------------------------------
// spatial

pub fn spatial_reverse_support_idempotent(cfg: &VerifyConfig) -> CheckResult {
    let module = "spatial";
    let name = "reverse-product-support-idempotent";
    let mut r = rng::derive(cfg.seed, 0x0301);
    for trial in 0..cfg.trials(60) {
        let n = 3 + trial % 3;
        let dom = random_space(&mut r, n);
        let cod = dom.clone();
        // random partial map with phases: each atom either keeps its
        // place with a random phase or leaves the support
        let mut map = BTreeMap::new();
        for x in 0..n {
            if r.gen_bool(0.7) {
                map.insert(x, (x, rng::unit_phase(&mut r)));
            }
        }
        let sp = SpatialPartialIsometry::new(dom.clone(), cod, map.clone()).unwrap();
        for p in [1.0, 1.7, 3.0] {
            let forward = sp.realize(p).unwrap();
            let back = sp.reverse().realize(p).unwrap();
            let prod = back.compose(&forward).unwrap();
            for i in 0..n {
                for j in 0..n {
                    let expect = if i == j && map.contains_key(&i) { 1.0 } else { 0.0 };
                    let got = prod.entry(i, j);
                    if expect == 0.0 && got.norm() != 0.0 {
                        return fail(module, name, format!("trial {trial}: sparsity violated at ({i},{j})"));
                    }
                    if (got - C64::new(expect, 0.0)).norm() > 1e-12 {
                        return fail(module, name, format!("trial {trial}: entry ({i},{j}) = {got}"));
                    }
                }
            }
        }
    }
    ok(module, name, format!("{} random supports, diagonal idempotents exact", cfg.trials(60)))
}

pub fn spatial_lamperti_accepts_permutations(cfg: &VerifyConfig) -> CheckResult {
    let module = "spatial";
    let name = "lamperti-accepts-complex-permutations";
    let mut r = rng::derive(cfg.seed, 0x0302);
    let s = WeightedSpace::counting(4);
    for trial in 0..cfg.trials(200) {
        let perm = rng::permutation(&mut r, 4);
        let phases: Vec<C64> = (0..4).map(|_| rng::unit_phase(&mut r)).collect();
        let u = SpatialPartialIsometry::from_permutation(s.clone(), &perm, &phases).unwrap();
        let m = u.realize(3.0).unwrap();
        for p in [1.0, 1.5, 3.0] {
            match lamperti_verdict(&m, p, 1e-9) {
                Ok(LampertiVerdict::IsometricBijection { gap, .. }) => {
                    if gap > 1e-9 {
                        return fail(module, name, format!("trial {trial}, p {p}: gap {gap:e}"));
                    }
                }
                other => {
                    return fail(module, name, format!("trial {trial}, p {p}: verdict {other:?}"));
                }
            }
        }
    }
    ok(module, name, format!("{} phase permutations accepted, gap <= 1e-9", cfg.trials(200)))
}

pub fn spatial_lamperti_rejects_unitaries(cfg: &VerifyConfig) -> CheckResult {
    let module = "spatial";
    let name = "lamperti-gap-for-generic-unitaries";
    let mut r = rng::derive(cfg.seed, 0x0303);
    let s = WeightedSpace::counting(4);
    let mut min_gap = f64::INFINITY;
    let mut tested = 0usize;
    while tested < cfg.trials(200) {
        let u = random_unitary(&s, &mut r);
        if is_complex_permutation(&u, 1e-9).unwrap().is_some() {
            continue;
        }
        tested += 1;
        for p in [1.0, 3.0] {
            match lamperti_verdict(&u, p, 1e-9).unwrap() {
                LampertiVerdict::NotIsometric { norm_gap, .. } => {
                    min_gap = min_gap.min(norm_gap);
                    if norm_gap <= 1e-6 {
                        let entries: Vec<String> = (0..4)
                            .map(|i| {
                                (0..4).map(|j| format!("{:.6}", u.entry(i, j))).collect::<Vec<_>>()
                                    .join(", ")
                            })
                            .collect();
                        return fail(
                            module,
                            name,
                            format!(
                                "trial {tested}, p {p}: gap {norm_gap:e} for unitary [{}]",
                                entries.join("; ")
                            ),
                        );
                    }
                }
                LampertiVerdict::IsometricBijection { .. } => {
                    return fail(module, name, format!("trial {tested}: unitary accepted as permutation"));
                }
            }
        }
    }
    ok(module, name, format!("{tested} generic unitaries, smallest gap {min_gap:.3e}"))
}

// ---------------------------------------------------------------------
// crossed

enum CoeffKind {
    Diagonal,
    Full,
}

fn m2_action(group: FiniteGroup, which: usize) -> IsometricAction {
    let carrier = WeightedSpace::normalized_counting(2);
    let n = group.order();
    let implementers: Vec<SpatialPartialIsometry> = match which {
        // Z_2: conjugation by the swap
        0 => (0..n)
            .map(|g| {
                let perm = if g == 0 { vec![0, 1] } else { vec![1, 0] };
                SpatialPartialIsometry::from_permutation(
                    carrier.clone(),
                    &perm,
                    &[C64::new(1.0, 0.0); 2],
                )
                .unwrap()
            })
            .collect(),
        // Z_n: conjugation by diag(1, zeta^g)
        1 => (0..n)
            .map(|g| {
                let t = 2.0 * core::f64::consts::PI * g as f64 / n as f64;
                let phases = [C64::new(1.0, 0.0), C64::new(t.cos(), t.sin())];
                SpatialPartialIsometry::from_permutation(carrier.clone(), &[0, 1], &phases)
                    .unwrap()
            })
            .collect(),
        // Z_2 x Z_2 (element index a*2+b): conjugation by diag((-1)^a, (-1)^b)
        _ => (0..n)
            .map(|g| {
                let (a, b) = (g / 2, g % 2);
                let sgn = |x: usize| C64::new(if x % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
                SpatialPartialIsometry::from_permutation(
                    carrier.clone(),
                    &[0, 1],
                    &[sgn(a), sgn(b)],
                )
                .unwrap()
            })
            .collect(),
    };
    IsometricAction::new(group, carrier, implementers).expect("m2 action is valid")
}

fn sandwich_cases() -> Vec<(String, Arc<IsometricAction>, CoeffKind)> {
    let z2 = FiniteGroup::cyclic(2);
    let z3 = FiniteGroup::cyclic(3);
    let z4 = FiniteGroup::cyclic(4);
    let klein = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
    let mut cases = Vec::new();
    for (gname, g) in [("Z2", &z2), ("Z3", &z3), ("Z4", &z4), ("Z2xZ2", &klein)] {
        cases.push((
            format!("{gname} on C(G)"),
            Arc::new(IsometricAction::translation(g.clone())),
            CoeffKind::Diagonal,
        ));
        let which = match gname {
            "Z2" => 0,
            "Z2xZ2" => 2,
            _ => 1,
        };
        cases.push((
            format!("{gname} on M2"),
            Arc::new(m2_action(g.clone(), which)),
            CoeffKind::Full,
        ));
    }
    cases
}

fn random_cc(
    action: &Arc<IsometricAction>,
    kind: &CoeffKind,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> CcElement {
    let carrier = action.carrier().clone();
    let mut coeffs = BTreeMap::new();
    for g in 0..action.group().order() {
        let m = match kind {
            CoeffKind::Full => random_operator(&carrier, rng),
            CoeffKind::Diagonal => {
                let mut m = OperatorMatrix::zero(carrier.clone(), carrier.clone());
                for i in 0..carrier.dim() {
                    m.set_entry(i, i, rng::gaussian_c64(rng));
                }
                m
            }
        };
        coeffs.insert(g, m);
    }
    CcElement::new(action.clone(), coeffs).unwrap()
}

pub fn crossed_norm_sandwich(cfg: &VerifyConfig) -> CheckResult {
    let module = "crossed";
    let name = "norm-sandwich";
    let mut r = rng::derive(cfg.seed, 0x0401);
    let trials = cfg.trials(100);
    for (label, action, kind) in sandwich_cases() {
        for trial in 0..trials {
            let a = random_cc(&action, &kind, &mut r);
            for (p, slack) in [(1.0, 1e-9), (2.0, 1e-9), (1.5, 1e-5), (3.0, 1e-5)] {
                let sup = sup_norm(&a, p).unwrap();
                let red = reduced_norm_seeded(&a, p, cfg.seed).unwrap().value;
                let l1 = l1_norm(&a, p).unwrap();
                if sup > red + slack || red > l1 + slack {
                    return fail(
                        module,
                        name,
                        format!(
                            "{label}, trial {trial}, p {p}: sup {sup}, reduced {red}, l1 {l1}"
                        ),
                    );
                }
            }
        }
    }
    ok(
        module,
        name,
        format!("{trials} elements per case over 8 (G, A) pairs and 4 exponents"),
    )
}

pub fn crossed_convolution_algebra(cfg: &VerifyConfig) -> CheckResult {
    let module = "crossed";
    let name = "convolution-associativity-distributivity";
    let mut r = rng::derive(cfg.seed, 0x0402);
    let action = Arc::new(IsometricAction::translation(FiniteGroup::cyclic(3)));
    for trial in 0..cfg.trials(60) {
        let a = random_cc(&action, &CoeffKind::Full, &mut r);
        let b = random_cc(&action, &CoeffKind::Full, &mut r);
        let c = random_cc(&action, &CoeffKind::Full, &mut r);
        let lhs = convolve(&convolve(&a, &b).unwrap(), &c).unwrap();
        let rhs = convolve(&a, &convolve(&b, &c).unwrap()).unwrap();
        if lhs.sub(&rhs).unwrap().max_abs_entry() > 1e-10 {
            return fail(module, name, format!("associativity fails at trial {trial}"));
        }
        let lhs = convolve(&a, &b.add(&c).unwrap()).unwrap();
        let rhs = convolve(&a, &b).unwrap().add(&convolve(&a, &c).unwrap()).unwrap();
        if lhs.sub(&rhs).unwrap().max_abs_entry() > 1e-10 {
            return fail(module, name, format!("distributivity fails at trial {trial}"));
        }
    }
    ok(module, name, format!("{} random triples over Z3 at 1e-10", cfg.trials(60)))
}

pub fn crossed_representation_homomorphism(cfg: &VerifyConfig) -> CheckResult {
    let module = "crossed";
    let name = "regular-representation-homomorphism";
    let mut r = rng::derive(cfg.seed, 0x0403);
    let action = Arc::new(IsometricAction::translation(FiniteGroup::cyclic(3)));
    let layout = RegularLayout::new(action.clone(), Pi0::TwistedSum);
    for trial in 0..cfg.trials(40) {
        let a = random_cc(&action, &CoeffKind::Full, &mut r);
        let b = random_cc(&action, &CoeffKind::Full, &mut r);
        let lhs = regular_representation_in(&convolve(&a, &b).unwrap(), &layout).unwrap();
        let rhs = regular_representation_in(&a, &layout)
            .unwrap()
            .compose(&regular_representation_in(&b, &layout).unwrap())
            .unwrap();
        if lhs.sub(&rhs).unwrap().max_abs_entry() > 1e-10 {
            return fail(module, name, format!("trial {trial}: rep(ab) != rep(a) rep(b)"));
        }
    }
    ok(module, name, format!("{} random pairs entrywise at 1e-10", cfg.trials(40)))
}

pub fn crossed_faithfulness(cfg: &VerifyConfig) -> CheckResult {
    let module = "crossed";
    let name = "regular-representation-faithfulness";
    let mut r = rng::derive(cfg.seed, 0x0404);
    let action = Arc::new(IsometricAction::translation(FiniteGroup::cyclic(3)));
    let layout = RegularLayout::new(action.clone(), Pi0::TwistedSum);
    let zero = CcElement::zero(action.clone());
    if regular_representation_in(&zero, &layout).unwrap().max_abs_entry() != 0.0 {
        return fail(module, name, "zero element has nonzero representation".into());
    }
    for trial in 0..cfg.trials(40) {
        let a = random_cc(&action, &CoeffKind::Full, &mut r);
        let rep = regular_representation_in(&a, &layout).unwrap();
        if a.max_abs_entry() > 1e-9 && rep.max_abs_entry() < 1e-12 {
            return fail(module, name, format!("trial {trial}: nonzero element represented as zero"));
        }
    }
    ok(module, name, "zero iff all coefficients vanish".into())
}

pub fn crossed_dual_group_law(cfg: &VerifyConfig) -> CheckResult {
    let module = "crossed";
    let name = "dual-action-group-law";
    let mut r = rng::derive(cfg.seed, 0x0405);
    let action = Arc::new(IsometricAction::translation(FiniteGroup::cyclic(4)));
    let chars = cyclic_characters(4);
    for trial in 0..cfg.trials(30) {
        let a = random_cc(&action, &CoeffKind::Full, &mut r);
        for t1 in &chars {
            for t2 in &chars {
                let prod: Vec<C64> = (0..4).map(|g| t1[g] * t2[g]).collect();
                let lhs = dual_action(&dual_action(&a, t1).unwrap(), t2).unwrap();
                let rhs = dual_action(&a, &prod).unwrap();
                if lhs.sub(&rhs).unwrap().max_abs_entry() > 1e-12 {
                    return fail(module, name, format!("trial {trial}: group law fails"));
                }
            }
        }
    }
    ok(module, name, format!("{} elements against all 16 character pairs", cfg.trials(30)))
}

// ---------------------------------------------------------------------
// freeaction

fn free_test_groups() -> Vec<(String, FiniteGroup)> {
    let mut out: Vec<(String, FiniteGroup)> = (2..=6)
        .map(|n| (format!("Z{n}"), FiniteGroup::cyclic(n)))
        .collect();
    out.push((
        "Z2xZ2".into(),
        FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)),
    ));
    out.push(("S3".into(), FiniteGroup::symmetric_3()));
    out
}

pub fn freeaction_synth_vanishing(_cfg: &VerifyConfig) -> CheckResult {
    let module = "freeaction";
    let name = "synth-family-vanishing";
    for (label, group) in free_test_groups() {
        let gspace = Arc::new(GSpace::left_translation(group));
        let fam = match synth_vanishing_family(&gspace, &[]) {
            Ok(f) => f,
            Err(e) => return fail(module, name, format!("{label}: synthesis failed: {e}")),
        };
        match fam.check(1e-10) {
            Ok(worst) => {
                if worst > 1e-10 {
                    return fail(module, name, format!("{label}: worst correlation {worst:e}"));
                }
            }
            Err(e) => return fail(module, name, format!("{label}: {e}")),
        }
    }
    ok(module, name, "all correlations vanish exhaustively for Z2..Z6, Z2xZ2, S3".into())
}

pub fn freeaction_averaging_contractive(cfg: &VerifyConfig) -> CheckResult {
    let module = "freeaction";
    let name = "averaging-contractive";
    let mut r = rng::derive(cfg.seed, 0x0501);
    let gspace = Arc::new(GSpace::left_translation(FiniteGroup::cyclic(3)));
    let action = Arc::new(gspace.induced_action());
    let fam = synth_vanishing_family(&gspace, &[]).unwrap();
    for trial in 0..cfg.trials(30) {
        let a = random_cc(&action, &CoeffKind::Diagonal, &mut r);
        let pa = crate::freeaction::averaging_operator(&fam, &a).unwrap();
        for p in [1.0, 1.5, 2.0] {
            let na = reduced_norm_seeded(&a, p, cfg.seed).unwrap().value;
            let npa = reduced_norm_seeded(&pa, p, cfg.seed).unwrap().value;
            if npa > na + 1e-6 {
                return fail(module, name, format!("trial {trial}, p {p}: |P(a)| {npa} > |a| {na}"));
            }
        }
    }
    ok(module, name, format!("{} elements, |P(a)| <= |a| + 1e-6", cfg.trials(30)))
}

pub fn freeaction_trace_functional(cfg: &VerifyConfig) -> CheckResult {
    let module = "freeaction";
    let name = "trace-functional";
    let mut r = rng::derive(cfg.seed, 0x0502);
    let gspace = Arc::new(GSpace::left_translation(FiniteGroup::cyclic(3)));
    let action = Arc::new(gspace.induced_action());
    let mu = InvariantMeasure::uniform(gspace.clone());
    let one = CcElement::unitary(action.clone(), action.group().identity()).unwrap();
    let t1 = crate::freeaction::trace_from_measure(&mu, &one).unwrap();
    if (t1 - C64::new(1.0, 0.0)).norm() > 1e-14 {
        return fail(module, name, format!("tau(1) = {t1}"));
    }
    for trial in 0..cfg.trials(40) {
        let a = random_cc(&action, &CoeffKind::Diagonal, &mut r);
        let b = random_cc(&action, &CoeffKind::Diagonal, &mut r);
        let alpha = rng::gaussian_c64(&mut r);
        // linearity
        let lin_lhs = crate::freeaction::trace_from_measure(
            &mu,
            &a.scale(alpha).add(&b).unwrap(),
        )
        .unwrap();
        let lin_rhs = alpha * crate::freeaction::trace_from_measure(&mu, &a).unwrap()
            + crate::freeaction::trace_from_measure(&mu, &b).unwrap();
        if (lin_lhs - lin_rhs).norm() > 1e-10 {
            return fail(module, name, format!("trial {trial}: linearity fails"));
        }
        // |tau(a)| <= reduced norm
        let ta = crate::freeaction::trace_from_measure(&mu, &a).unwrap();
        for p in [1.0, 2.0] {
            let red = reduced_norm_seeded(&a, p, cfg.seed).unwrap().value;
            if ta.norm() > red + 1e-6 {
                return fail(module, name, format!("trial {trial}, p {p}: |tau(a)| {0} > {red}", ta.norm()));
            }
        }
    }
    ok(module, name, format!("linearity, tau(1) = 1, |tau| <= reduced norm on {} elements", cfg.trials(40)))
}

pub fn freeaction_simplicity_mechanism(cfg: &VerifyConfig) -> CheckResult {
    let module = "freeaction";
    let name = "simplicity-mechanism";
    let mut r = rng::derive(cfg.seed, 0x0503);
    let gspace = Arc::new(GSpace::left_translation(FiniteGroup::cyclic(3)));
    let action = Arc::new(gspace.induced_action());
    let fam = synth_vanishing_family(&gspace, &[]).unwrap();
    let e = action.group().identity();
    for trial in 0..cfg.trials(30) {
        // averaging a random element with nonzero E(a) leaves a nonzero diagonal
        let a = random_cc(&action, &CoeffKind::Diagonal, &mut r);
        let ea = crate::crossed::conditional_expectation(&a);
        if ea.max_abs_entry() < 1e-9 {
            continue;
        }
        let pa = crate::freeaction::averaging_operator(&fam, &a).unwrap();
        let diag = pa.coefficient(e);
        if diag.max_abs_entry() < 1e-12 {
            return fail(module, name, format!("trial {trial}: averaging killed a nonzero expectation"));
        }
        for g in 0..action.group().order() {
            if g != e && pa.coefficient(g).max_abs_entry() > 1e-10 {
                return fail(module, name, format!("trial {trial}: P(a) has an off-identity term"));
            }
        }

        // for nonvanishing diagonal f, sum_g u_g f conj(f) u_g^{-1} is invertible
        let vals: Vec<C64> = (0..3)
            .map(|_| {
                let z = rng::gaussian_c64(&mut r);
                z + z / z.norm() * 0.2
            })
            .collect();
        let f = gspace.diagonal(&vals).unwrap();
        let fconj = gspace
            .diagonal(&vals.iter().map(|z| z.conj()).collect::<Vec<_>>())
            .unwrap();
        let ffbar = CcElement::monomial(action.clone(), e, f.compose(&fconj).unwrap()).unwrap();
        let mut acc = CcElement::zero(action.clone());
        for g in 0..action.group().order() {
            let ug = CcElement::unitary(action.clone(), g).unwrap();
            let uginv = CcElement::unitary(action.clone(), action.group().inv(g)).unwrap();
            acc = acc.add(&convolve(&convolve(&ug, &ffbar).unwrap(), &uginv).unwrap()).unwrap();
        }
        // the sum is a diagonal at the identity with strictly positive entries
        for g in 0..action.group().order() {
            if g != e && acc.coefficient(g).max_abs_entry() > 1e-10 {
                return fail(module, name, format!("trial {trial}: orbit sum not concentrated at 1"));
            }
        }
        let diag = acc.coefficient(e);
        for x in 0..3 {
            let v = diag.entry(x, x);
            if v.re <= 1e-9 || v.im.abs() > 1e-10 {
                return fail(module, name, format!("trial {trial}: orbit sum entry {v} not positive"));
            }
        }
    }
    ok(module, name, "averaging keeps expectations; orbit sums of |f|^2 are invertible".into())
}

// ---------------------------------------------------------------------
// leavitt

type Lq = LeavittElement<crate::exact::GaussianRational>;

fn random_leavitt(d: u32, degree: usize, terms: usize, rng: &mut rand_chacha::ChaCha8Rng) -> Lq {
    let mut x = Lq::zero(d).unwrap();
    for _ in 0..terms {
        let lm = rng.gen_range(0..=degree);
        let ln = rng.gen_range(0..=degree);
        let mu = Word((0..lm).map(|_| rng.gen_range(0..d) as u8).collect());
        let nu = Word((0..ln).map(|_| rng.gen_range(0..d) as u8).collect());
        let c = gq(rng.gen_range(-3i64..=3), rng.gen_range(-3i64..=3));
        x = x.add(&Lq::monomial(d, mu, nu, c).unwrap()).unwrap();
    }
    x
}

pub fn leavitt_associativity(cfg: &VerifyConfig) -> CheckResult {
    let module = "leavitt";
    let name = "multiply-associativity";
    let mut r = rng::derive(cfg.seed, 0x0601);
    let trials = cfg.trials(500);
    for d in [2u32, 3] {
        for trial in 0..trials {
            let a = random_leavitt(d, 2, 3, &mut r);
            let b = random_leavitt(d, 2, 3, &mut r);
            let c = random_leavitt(d, 2, 3, &mut r);
            let lhs = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let rhs = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            if lhs != rhs {
                return fail(module, name, format!("d {d}, trial {trial}: (ab)c != a(bc)"));
            }
        }
    }
    ok(module, name, format!("{trials} exact random triples per d in {{2, 3}}"))
}

pub fn leavitt_normal_form_stability(cfg: &VerifyConfig) -> CheckResult {
    let module = "leavitt";
    let name = "normal-form-stability";
    let mut r = rng::derive(cfg.seed, 0x0602);
    for d in [2u32, 3] {
        for trial in 0..cfg.trials(80) {
            let x = random_leavitt(d, 3, 6, &mut r);
            let mut fwd = Lq::zero(d).unwrap();
            for ((mu, nu), c) in x.terms() {
                fwd = fwd.add(&Lq::monomial(d, mu.clone(), nu.clone(), c.clone()).unwrap()).unwrap();
            }
            let mut rev = Lq::zero(d).unwrap();
            for ((mu, nu), c) in x.terms().iter().rev() {
                rev = rev.add(&Lq::monomial(d, mu.clone(), nu.clone(), c.clone()).unwrap()).unwrap();
            }
            if fwd != x || rev != x {
                return fail(module, name, format!("d {d}, trial {trial}: renormalization moved the element"));
            }
            for (mu, nu) in x.terms().keys() {
                let bad = !mu.is_empty()
                    && !nu.is_empty()
                    && *mu.0.last().unwrap() == (d - 1) as u8
                    && *nu.0.last().unwrap() == (d - 1) as u8;
                if bad {
                    return fail(module, name, format!("d {d}, trial {trial}: out-of-basis term survived"));
                }
            }
        }
    }
    ok(module, name, "idempotent under renormalization in both term orders".into())
}

pub fn leavitt_injectivity_evidence(cfg: &VerifyConfig) -> CheckResult {
    let module = "leavitt";
    let name = "representation-injectivity-evidence";
    let mut r = rng::derive(cfg.seed, 0x0603);
    for d in [2u32, 3] {
        let window = (d as usize).pow(3);
        let mut tested = 0usize;
        while tested < cfg.trials(200) {
            let x = random_leavitt(d, 2, 4, &mut r);
            if x.is_zero() {
                continue;
            }
            tested += 1;
            let rep = base_d_representation(&x, window, 2.0).unwrap();
            if rep.max_abs_entry() <= 1e-12 {
                return fail(module, name, format!("d {d}: nonzero element vanished at window {window}"));
            }
        }
    }
    ok(module, name, format!("{} nonzero elements per d stay nonzero at window d^3", cfg.trials(200)))
}

pub fn leavitt_representation_homomorphism(cfg: &VerifyConfig) -> CheckResult {
    let module = "leavitt";
    let name = "representation-homomorphism-safe-window";
    let mut r = rng::derive(cfg.seed, 0x0604);
    let d = 2u32;
    let window = 32usize;
    for trial in 0..cfg.trials(30) {
        let a = random_leavitt(d, 2, 3, &mut r);
        let b = random_leavitt(d, 2, 3, &mut r);
        let safe = window >> (a.degree() + b.degree());
        if safe == 0 {
            continue;
        }
        let rep_ab = base_d_representation(&a.multiply(&b).unwrap(), window, 2.0).unwrap();
        let prod = base_d_representation(&a, window, 2.0)
            .unwrap()
            .compose(&base_d_representation(&b, window, 2.0).unwrap())
            .unwrap();
        for col in 0..safe {
            for row in 0..window {
                if (rep_ab.entry(row, col) - prod.entry(row, col)).norm() > 1e-10 {
                    return fail(module, name, format!("trial {trial}: mismatch at ({row}, {col})"));
                }
            }
        }
    }
    ok(module, name, "rep(ab) = rep(a) rep(b) on columns below M / d^deg".into())
}

// ---------------------------------------------------------------------
// stabilized

pub fn stabilized_identity_ledger(_cfg: &VerifyConfig) -> CheckResult {
    let module = "stabilized";
    let name = "identity-ledger-exact";
    let mut count = 0usize;
    for d in [2u32, 3] {
        match stabilized::identity_ledger(d) {
            Ok(lines) => {
                for line in lines {
                    count += 1;
                    if !line.pass {
                        return fail(module, name, format!("{}: {}", line.name, line.detail));
                    }
                }
            }
            Err(e) => return fail(module, name, format!("ledger failed to run: {e}")),
        }
    }
    ok(module, name, format!("{count} identities hold with exact arithmetic, d in {{2, 3}}"))
}

pub fn stabilized_beta_automorphism(cfg: &VerifyConfig) -> CheckResult {
    let module = "stabilized";
    let name = "beta-automorphism-exhaustive";
    let d = 2u32;
    let max_depth = if cfg.quick { 1 } else { 2 };
    let mut words = Vec::new();
    for j in 0..4u64 {
        for k in 0..4u64 {
            words.push(BWord::head_only(j, k));
        }
    }
    let mut depth_words = words.clone();
    for _ in 0..max_depth {
        let mut next = Vec::new();
        for w in &depth_words {
            for l in 0..2u8 {
                for m in 0..2u8 {
                    let mut t = w.tail.clone();
                    t.push((l, m));
                    next.push(BWord { head: w.head, tail: t });
                }
            }
        }
        words.extend(next.iter().cloned());
        depth_words = next;
    }
    // exhaustive pairs at depth <= 1 plus sampled deeper pairs
    let shallow: Vec<&BWord> = words.iter().filter(|w| w.depth() <= 1).collect();
    for wa in &shallow {
        for wb in &shallow {
            let a = BElement::word(d, (*wa).clone()).unwrap();
            let b = BElement::word(d, (*wb).clone()).unwrap();
            let lhs = beta(&b_multiply(&a, &b).unwrap());
            let rhs = b_multiply(&beta(&a), &beta(&b)).unwrap();
            if lhs != rhs {
                return fail(module, name, format!("beta not multiplicative at {wa:?}, {wb:?}"));
            }
            let back = stabilized::beta_inv(&beta(&a));
            if back != a {
                return fail(module, name, format!("beta round trip fails at {wa:?}"));
            }
        }
    }
    let deep: Vec<&BWord> = words.iter().filter(|w| w.depth() == max_depth).collect();
    for wa in deep.iter().step_by(7) {
        for wb in deep.iter().step_by(11) {
            let a = BElement::word(d, (*wa).clone()).unwrap();
            let b = BElement::word(d, (*wb).clone()).unwrap();
            let lhs = beta(&b_multiply(&a, &b).unwrap());
            let rhs = b_multiply(&beta(&a), &beta(&b)).unwrap();
            if lhs != rhs {
                return fail(module, name, format!("beta not multiplicative at {wa:?}, {wb:?}"));
            }
        }
    }
    ok(module, name, format!("heads < 4, depths <= {max_depth}, exact"))
}

fn random_belement(d: u32, rng: &mut rand_chacha::ChaCha8Rng) -> BElement {
    let mut terms = Vec::new();
    for _ in 0..3 {
        let head = (rng.gen_range(0..4u64), rng.gen_range(0..4u64));
        let depth = rng.gen_range(0..=2usize);
        let tail = (0..depth)
            .map(|_| (rng.gen_range(0..d) as u8, rng.gen_range(0..d) as u8))
            .collect();
        terms.push((BWord { head, tail }, gq(rng.gen_range(-2i64..=2), rng.gen_range(-2i64..=2))));
    }
    BElement::from_terms(d, terms).unwrap()
}

pub fn stabilized_crossed_associativity(cfg: &VerifyConfig) -> CheckResult {
    let module = "stabilized";
    let name = "crossed-associativity";
    let mut r = rng::derive(cfg.seed, 0x0701);
    let d = 2u32;
    for trial in 0..cfg.trials(20) {
        let mk = |r: &mut rand_chacha::ChaCha8Rng| {
            let mut x = CrossedElement::zero(d).unwrap();
            for n in -2i64..=2 {
                if r.gen_bool(0.5) {
                    x = x.add(&CrossedElement::monomial(n, random_belement(d, r))).unwrap();
                }
            }
            x
        };
        let a = mk(&mut r);
        let b = mk(&mut r);
        let c = mk(&mut r);
        let lhs = x_multiply(&x_multiply(&a, &b).unwrap(), &c).unwrap();
        let rhs = x_multiply(&a, &x_multiply(&b, &c).unwrap()).unwrap();
        if lhs != rhs {
            return fail(module, name, format!("trial {trial}: (ab)c != a(bc)"));
        }
    }
    ok(module, name, format!("{} exact random triples, supports in [-2, 2]", cfg.trials(20)))
}

pub fn stabilized_coefficient_consistency(cfg: &VerifyConfig) -> CheckResult {
    let module = "stabilized";
    let name = "coefficient-extraction-consistency";
    let mut r = rng::derive(cfg.seed, 0x0702);
    let d = 2u32;
    for trial in 0..cfg.trials(20) {
        let mut x = CrossedElement::zero(d).unwrap();
        for n in -1i64..=1 {
            x = x.add(&CrossedElement::monomial(n, random_belement(d, &mut r))).unwrap();
        }
        for m in -2i64..=2 {
            let conj = stabilized::ad_u(m, &x);
            for n in -1i64..=1 {
                if conj.coefficient(n) != beta_pow(m, &x.coefficient(n)) {
                    return fail(module, name, format!("trial {trial}: E_{n} after Ad(u_{m}) inconsistent"));
                }
            }
        }
    }
    ok(module, name, "E_n tracks beta^m under conjugation by u_m, exact".into())
}

// ---------------------------------------------------------------------
// ktheory

pub fn ktheory_ring_axioms(cfg: &VerifyConfig) -> CheckResult {
    let module = "ktheory";
    let name = "localized-ring-axioms";
    use crate::ktheory::LocalizedInt;
    use num_bigint::BigInt;
    let mut r = rng::derive(cfg.seed, 0x0801);
    let trials = cfg.trials(1000);
    for trial in 0..trials {
        let d = [2u32, 3, 5, 10][r.gen_range(0..4)];
        let mk = |r: &mut rand_chacha::ChaCha8Rng| {
            LocalizedInt::new(BigInt::from(r.gen_range(-100i64..=100)), r.gen_range(0..5), d)
                .unwrap()
        };
        let a = mk(&mut r);
        let b = mk(&mut r);
        let c = mk(&mut r);
        let assoc_add = a.add(&b).unwrap().add(&c).unwrap() == a.add(&b.add(&c).unwrap()).unwrap();
        let comm_add = a.add(&b).unwrap() == b.add(&a).unwrap();
        let assoc_mul =
            a.mul(&b).unwrap().mul(&c).unwrap() == a.mul(&b.mul(&c).unwrap()).unwrap();
        let distrib = a.mul(&b.add(&c).unwrap()).unwrap()
            == a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        let inverse = a.sub(&a).unwrap().is_zero();
        if !(assoc_add && comm_add && assoc_mul && distrib && inverse) {
            return fail(module, name, format!("trial {trial}, d {d}: ring axiom violated"));
        }
    }
    ok(module, name, format!("{trials} exact random triples"))
}

pub fn ktheory_level_raise_invariance(_cfg: &VerifyConfig) -> CheckResult {
    let module = "ktheory";
    let name = "k0-level-raise-invariance";
    use crate::ktheory::LocalizedInt;
    use num_bigint::BigInt;
    let d = 2u32;
    for rank in 0u64..=8 {
        for r in 0u32..=3 {
            let v1 = LocalizedInt::new(BigInt::from(rank), r, d).unwrap();
            let v2 = LocalizedInt::new(BigInt::from(rank * d as u64), r + 1, d).unwrap();
            if v1 != v2 {
                return fail(module, name, format!("rank {rank}, depth {r}"));
            }
        }
    }
    ok(module, name, "exhaustive for d = 2, ranks <= 8, depths <= 3".into())
}

pub fn ktheory_pv_oracle_agreement(_cfg: &VerifyConfig) -> CheckResult {
    let module = "ktheory";
    let name = "pv-cokernel-oracle-agreement";
    for d in [2u32, 3, 4, 5, 6, 10] {
        for m in -12i64..=12 {
            if m == 0 {
                continue;
            }
            let fast = pv_cokernel(m, d).unwrap().order;
            let slow = match pv_cokernel_oracle(m, d) {
                Ok(v) => v,
                Err(e) => return fail(module, name, format!("oracle failed at m {m}, d {d}: {e}")),
            };
            if fast != slow {
                return fail(module, name, format!("m {m}, d {d}: {fast} vs oracle {slow}"));
            }
        }
    }
    ok(module, name, "all m in [-12, 12], d in {2, 3, 4, 5, 6, 10}, exact".into())
}

pub fn ktheory_unit_relation_consistency(_cfg: &VerifyConfig) -> CheckResult {
    let module = "ktheory";
    let name = "unit-relation-consistency";
    for d in 2u32..=6 {
        let witness = match mvn_unit_relation(d) {
            Ok(w) => w,
            Err(e) => return fail(module, name, format!("d {d}: witness failed: {e}")),
        };
        if !witness.verified() {
            return fail(module, name, format!("d {d}: Leavitt relation witness failed"));
        }
        let order = od_ktheory_report(d).unwrap().k0.order;
        if order == 0 || witness.relation_exponent as u64 % order != 0 {
            return fail(
                module,
                name,
                format!("d {d}: order {order} does not divide exponent {}", witness.relation_exponent),
            );
        }
    }
    ok(module, name, "PV order divides the Leavitt relation exponent, d in 2..=6".into())
}

/// Executes the full catalog in canonical order.
pub fn run_all(cfg: &VerifyConfig) -> Vec<CheckResult> {
    let mut results = vec![
        space_norm_axioms(cfg),
        space_union_roundtrip(cfg),
        opnorm_witness_certification(cfg),
        opnorm_tensor_multiplicativity(cfg),
        opnorm_submultiplicativity(cfg),
        opnorm_finite_section_decay(cfg),
        opnorm_l1_obstruction(cfg),
        opnorm_power_vs_oracle(cfg),
        spatial_reverse_support_idempotent(cfg),
        spatial_lamperti_accepts_permutations(cfg),
        spatial_lamperti_rejects_unitaries(cfg),
        crossed_norm_sandwich(cfg),
        crossed_convolution_algebra(cfg),
        crossed_representation_homomorphism(cfg),
        crossed_faithfulness(cfg),
        crossed_dual_group_law(cfg),
        freeaction_synth_vanishing(cfg),
        freeaction_averaging_contractive(cfg),
        freeaction_trace_functional(cfg),
        freeaction_simplicity_mechanism(cfg),
        leavitt_associativity(cfg),
        leavitt_normal_form_stability(cfg),
        leavitt_injectivity_evidence(cfg),
        leavitt_representation_homomorphism(cfg),
        stabilized_identity_ledger(cfg),
        stabilized_beta_automorphism(cfg),
        stabilized_crossed_associativity(cfg),
        stabilized_coefficient_consistency(cfg),
        ktheory_ring_axioms(cfg),
        ktheory_level_raise_invariance(cfg),
        ktheory_pv_oracle_agreement(cfg),
        ktheory_unit_relation_consistency(cfg),
    ];
    results.sort_by(|a, b| (a.module, a.name).cmp(&(b.module, b.name)));
    results
}
