//! Acceptance suite: one pass/fail line per criterion, each pinned to
//! its stated tolerance and time budget. Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.

use std::collections::BTreeMap;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use lplab_core::crossed::{
    coefficient_from_operator, conditional_expectation, convolve, cyclic_characters, dual_action,
    dual_implementer, reduced_norm_seeded, regular_representation_in,
    CcElement, FiniteGroup, IsometricAction, Pi0, RegularLayout,
};
use lplab_core::exact::{gq, gq_one, GaussianRational};
use lplab_core::freeaction::{
    averaging_operator, check_invariance, synth_vanishing_family, trace_from_measure, GSpace,
    InvariantMeasure,
};
use lplab_core::ktheory::idempotent_rank;
use lplab_core::leavitt::{omega, LeavittElement};
use lplab_core::opnorm::opnorm_value;
use lplab_core::rng;
use lplab_core::space::OperatorMatrix;
use lplab_core::stabilized::{beta_inv, f, Realizer};
use lplab_core::verify::{
    crossed_norm_sandwich, leavitt_associativity, opnorm_finite_section_decay,
    opnorm_l1_obstruction, opnorm_power_vs_oracle, opnorm_tensor_multiplicativity, VerifyConfig,
};
use lplab_core::{C64, DEFAULT_SEED};

type Lq = LeavittElement<GaussianRational>;

struct Criterion {
    number: usize,
    title: &'static str,
    budget: Duration,
}

struct Outcome {
    number: usize,
    title: &'static str,
    pass: bool,
    elapsed: Duration,
    budget: Duration,
    detail: String,
}

fn run_criterion(
    c: Criterion,
    body: impl FnOnce() -> Result<String, String>,
) -> Outcome {
    let start = Instant::now();
    let result = body();
    let elapsed = start.elapsed();
    let (pass, detail) = match result {
        Ok(msg) => {
            if elapsed <= c.budget {
                (true, msg)
            } else {
                (false, format!("{msg}; exceeded budget {:?}", c.budget))
            }
        }
        Err(msg) => (false, msg),
    };
    let outcome = Outcome {
        number: c.number,
        title: c.title,
        pass,
        elapsed,
        budget: c.budget,
        detail,
    };
    println!(
        "ACCEPTANCE {:>2} [{}] {:>8.2?} (budget {:>5.0?})  {} - {}",
        outcome.number,
        if outcome.pass { "PASS" } else { "FAIL" },
        outcome.elapsed,
        outcome.budget,
        outcome.title,
        outcome.detail
    );
    outcome
}

fn lplab(args: &[&str]) -> Result<(i32, serde_json::Value), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_lplab"))
        .args(args)
        .output()
        .map_err(|e| format!("failed to spawn lplab: {e}"))?;
    let code = out.status.code().unwrap_or(-1);
    let stdout = String::from_utf8_lossy(&out.stdout);
    let value = serde_json::from_str(stdout.trim())
        .map_err(|e| format!("non-JSON output from lplab {args:?}: {e}: {stdout}"))?;
    Ok((code, value))
}

fn random_cc_full(action: &Arc<IsometricAction>, r: &mut rand_chacha::ChaCha8Rng) -> CcElement {
    let carrier = action.carrier().clone();
    let mut coeffs = BTreeMap::new();
    for g in 0..action.group().order() {
        coeffs.insert(
            g,
            OperatorMatrix::from_fn(carrier.clone(), carrier.clone(), |_, _| {
                rng::gaussian_c64(r)
            }),
        );
    }
    CcElement::new(action.clone(), coeffs).unwrap()
}

fn random_cc_diag(
    gspace: &Arc<GSpace>,
    action: &Arc<IsometricAction>,
    r: &mut rand_chacha::ChaCha8Rng,
) -> CcElement {
    let mut coeffs = BTreeMap::new();
    for g in 0..action.group().order() {
        let vals: Vec<C64> = (0..gspace.len()).map(|_| rng::gaussian_c64(r)).collect();
        coeffs.insert(g, gspace.diagonal(&vals).unwrap());
    }
    CcElement::new(action.clone(), coeffs).unwrap()
}

fn criterion_1() -> Outcome {
    run_criterion(
        Criterion {
            number: 1,
            title: "K-theory headline: K0 = Z/(d-1)Z and K1 = 0 via the CLI",
            budget: Duration::from_secs(1),
        },
        || {
            for d in 2u64..=12 {
                let (code, v) = lplab(&["ktheory", "od", "--d", &d.to_string()])?;
                if code != 0 {
                    return Err(format!("d={d}: exit code {code}"));
                }
                let k0 = v["K0"]["order"].as_u64().ok_or("missing K0 order")?;
                let k1 = v["K1"]["order"].as_u64().ok_or("missing K1 order")?;
                if k0 != d - 1 || k1 != 1 {
                    return Err(format!("d={d}: K0 order {k0}, K1 order {k1}"));
                }
            }
            Ok("orders k-1 and trivial K1 for every k in 2..=12, exact".into())
        },
    )
}

fn criterion_2() -> Outcome {
    run_criterion(
        Criterion {
            number: 2,
            title: "PV cokernel matches the brute-force residue oracle",
            budget: Duration::from_secs(5),
        },
        || {
            let check = lplab_core::verify::ktheory_pv_oracle_agreement(&VerifyConfig::default());
            if check.pass {
                Ok(check.detail)
            } else {
                Err(check.detail)
            }
        },
    )
}

fn criterion_3() -> Outcome {
    run_criterion(
        Criterion {
            number: 3,
            title: "beta_inv(f_n) = f_{n+1} symbolically and rank doubles concretely",
            budget: Duration::from_secs(5),
        },
        || {
            for d in [2u32, 3] {
                for n in 0..=3u32 {
                    if beta_inv(&f(d, n).unwrap()) != f(d, n + 1).unwrap() {
                        return Err(format!("symbolic beta_inv(f_{n}) != f_{} for d={d}", n + 1));
                    }
                }
                let window = (d as usize).pow(4);
                let realizer = Realizer::new(d, window, 0, 2.0).unwrap();
                for n in 0..=3u32 {
                    let rn = idempotent_rank(&realizer.realize_b(&f(d, n).unwrap()).unwrap(), 1e-9)
                        .map_err(|e| format!("rank of f_{n} (d={d}): {e}"))?;
                    let rn1 =
                        idempotent_rank(&realizer.realize_b(&f(d, n + 1).unwrap()).unwrap(), 1e-9)
                            .map_err(|e| format!("rank of f_{} (d={d}): {e}", n + 1))?;
                    if rn1 != d as u64 * rn {
                        return Err(format!(
                            "d={d}, n={n}: rank {rn1} is not {d} * {rn} at window {window}"
                        ));
                    }
                }
            }
            Ok("multiplication by d verified symbolically and by integer ranks at M = d^4".into())
        },
    )
}

fn criterion_4() -> Outcome {
    run_criterion(
        Criterion {
            number: 4,
            title: "stabilized identity ledger exact for d in {2, 3}",
            budget: Duration::from_secs(30),
        },
        || {
            let mut count = 0;
            for d in [2u32, 3] {
                for line in lplab_core::stabilized::identity_ledger(d).unwrap() {
                    count += 1;
                    if !line.pass {
                        return Err(format!("{}: {}", line.name, line.detail));
                    }
                }
            }
            Ok(format!("{count} identities hold with exact Gaussian-rational arithmetic"))
        },
    )
}

fn criterion_5() -> Outcome {
    run_criterion(
        Criterion {
            number: 5,
            title: "norm sandwich sup <= reduced <= l1 over all (G, A, p) cases",
            budget: Duration::from_secs(180),
        },
        || {
            let check = crossed_norm_sandwich(&VerifyConfig::default());
            if check.pass {
                Ok(check.detail)
            } else {
                Err(check.detail)
            }
        },
    )
}

fn criterion_6() -> Outcome {
    run_criterion(
        Criterion {
            number: 6,
            title: "p = 1 scalar group algebra norm is the coefficient l1 norm",
            budget: Duration::from_secs(10),
        },
        || {
            let mut r = rng::derive(DEFAULT_SEED, 0xacc6);
            let groups: Vec<(&str, FiniteGroup)> = vec![
                ("Z2", FiniteGroup::cyclic(2)),
                ("Z3", FiniteGroup::cyclic(3)),
                ("Z4", FiniteGroup::cyclic(4)),
                ("Z2xZ2", FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2))),
                ("Z6", FiniteGroup::cyclic(6)),
            ];
            for (label, group) in groups {
                let action = Arc::new(IsometricAction::trivial_scalar(group));
                for trial in 0..50 {
                    let a = random_cc_full(&action, &mut r);
                    let red = reduced_norm_seeded(&a, 1.0, DEFAULT_SEED).unwrap().value;
                    let l1: f64 = (0..action.group().order())
                        .map(|g| a.coefficient(g).entry(0, 0).norm())
                        .sum();
                    if (red - l1).abs() > 1e-9 {
                        return Err(format!("{label}, trial {trial}: reduced {red} vs l1 {l1}"));
                    }
                }
            }
            Ok("50 seeded elements per group, equality within 1e-9".into())
        },
    )
}

fn criterion_7() -> Outcome {
    run_criterion(
        Criterion {
            number: 7,
            title: "conditional expectation: roundtrip, contractivity, faithfulness",
            budget: Duration::from_secs(30),
        },
        || {
            let mut r = rng::derive(DEFAULT_SEED, 0xacc7);
            let action = Arc::new(IsometricAction::translation(FiniteGroup::cyclic(3)));
            let layout = RegularLayout::new(action.clone(), Pi0::TwistedSum);
            for trial in 0..100 {
                let a = random_cc_full(&action, &mut r);
                let rep = regular_representation_in(&a, &layout).unwrap();
                for g in 0..3 {
                    let got = coefficient_from_operator(&layout, &rep, g, 1e-10)
                        .map_err(|e| format!("trial {trial}, g={g}: {e}"))?;
                    let diff = got.sub(&a.coefficient(g)).unwrap().max_abs_entry();
                    if diff > 1e-10 {
                        return Err(format!("trial {trial}, g={g}: roundtrip error {diff:e}"));
                    }
                    for p in [1.0, 2.0] {
                        let ng = opnorm_value(&got, p).unwrap();
                        let red = reduced_norm_seeded(&a, p, DEFAULT_SEED).unwrap().value;
                        if ng > red + 1e-9 {
                            return Err(format!(
                                "trial {trial}, g={g}, p={p}: |E_g(a)| {ng} > reduced {red}"
                            ));
                        }
                    }
                }
                // zero coefficients force the zero operator
                let zero = CcElement::zero(action.clone());
                if regular_representation_in(&zero, &layout).unwrap().max_abs_entry() != 0.0 {
                    return Err("zero element has nonzero representation".into());
                }
            }
            Ok("100 seeded cases: exact roundtrip, contractive E_g, faithful".into())
        },
    )
}

fn criterion_8() -> Outcome {
    run_criterion(
        Criterion {
            number: 8,
            title: "dual action of Z4-hat is implemented by w_tau and isometric",
            budget: Duration::from_secs(30),
        },
        || {
            let mut r = rng::derive(DEFAULT_SEED, 0xacc8);
            let action = Arc::new(IsometricAction::translation(FiniteGroup::cyclic(4)));
            let layout = RegularLayout::new(action.clone(), Pi0::TwistedSum);
            let chars = cyclic_characters(4);
            for trial in 0..25 {
                let a = random_cc_full(&action, &mut r);
                let rep_a = regular_representation_in(&a, &layout).unwrap();
                let base: Vec<(f64, f64, f64)> = [(2.0, 1e-9), (1.5, 1e-5)]
                    .iter()
                    .map(|&(p, tol)| {
                        (p, tol, reduced_norm_seeded(&a, p, DEFAULT_SEED).unwrap().value)
                    })
                    .collect();
                for (k, tau) in chars.iter().enumerate() {
                    let moved = dual_action(&a, tau).unwrap();
                    let lhs = regular_representation_in(&moved, &layout).unwrap();
                    let w = dual_implementer(&layout, tau).unwrap();
                    let winv = dual_implementer(
                        &layout,
                        &tau.iter().map(|t| t.conj()).collect::<Vec<_>>(),
                    )
                    .unwrap();
                    let rhs = w.compose(&rep_a).unwrap().compose(&winv).unwrap();
                    let diff = lhs.sub(&rhs).unwrap().max_abs_entry();
                    if diff > 1e-10 {
                        return Err(format!("trial {trial}, char {k}: conjugation error {diff:e}"));
                    }
                    for &(p, tol, n0) in &base {
                        let n1 = reduced_norm_seeded(&moved, p, DEFAULT_SEED).unwrap().value;
                        if (n0 - n1).abs() > tol * (1.0 + n0) {
                            return Err(format!(
                                "trial {trial}, char {k}, p={p}: {n0} vs {n1}"
                            ));
                        }
                    }
                }
            }
            Ok("25 seeded elements, all 4 characters: exact conjugation, isometric".into())
        },
    )
}

fn criterion_9() -> Outcome {
    run_criterion(
        Criterion {
            number: 9,
            title: "free-action averaging recovers the conditional expectation",
            budget: Duration::from_secs(30),
        },
        || {
            let mut r = rng::derive(DEFAULT_SEED, 0xacc9);
            let mut groups: Vec<(String, FiniteGroup)> = (2..=6)
                .map(|n| (format!("Z{n}"), FiniteGroup::cyclic(n)))
                .collect();
            groups.push((
                "Z2xZ2".into(),
                FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)),
            ));
            groups.push(("S3".into(), FiniteGroup::symmetric_3()));
            for (label, group) in groups {
                let gspace = Arc::new(GSpace::left_translation(group));
                let action = Arc::new(gspace.induced_action());
                let fam = synth_vanishing_family(&gspace, &[])
                    .map_err(|e| format!("{label}: {e}"))?;
                let worst = fam.check(1e-10).map_err(|e| format!("{label}: {e}"))?;
                if worst > 1e-10 {
                    return Err(format!("{label}: correlation {worst:e}"));
                }
                for trial in 0..50 {
                    let a = random_cc_diag(&gspace, &action, &mut r);
                    let pa = averaging_operator(&fam, &a).unwrap();
                    let ea = CcElement::monomial(
                        action.clone(),
                        action.group().identity(),
                        conditional_expectation(&a),
                    )
                    .unwrap();
                    let diff = pa.sub(&ea).unwrap().max_abs_entry();
                    if diff > 1e-10 {
                        return Err(format!("{label}, trial {trial}: P(a) - E(a) = {diff:e}"));
                    }
                }
            }
            Ok("exhaustive vanishing and P(a) = E(a) on 50 elements per group".into())
        },
    )
}

fn criterion_10() -> Outcome {
    run_criterion(
        Criterion {
            number: 10,
            title: "traces from invariant measures are tracial; non-invariance is caught",
            budget: Duration::from_secs(10),
        },
        || {
            let mut r = rng::derive(DEFAULT_SEED, 0xacc10);
            let groups = vec![
                FiniteGroup::cyclic(3),
                FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)),
            ];
            for group in groups {
                let gspace = Arc::new(GSpace::left_translation(group));
                let action = Arc::new(gspace.induced_action());
                let mu = InvariantMeasure::uniform(gspace.clone());
                for trial in 0..50 {
                    let a = random_cc_diag(&gspace, &action, &mut r);
                    let b = random_cc_diag(&gspace, &action, &mut r);
                    let ab = trace_from_measure(&mu, &convolve(&a, &b).unwrap()).unwrap();
                    let ba = trace_from_measure(&mu, &convolve(&b, &a).unwrap()).unwrap();
                    if (ab - ba).norm() > 1e-10 {
                        return Err(format!("trial {trial}: tau(ab) - tau(ba) = {:e}", (ab - ba).norm()));
                    }
                }
                // a point mass is not invariant under a free action
                let mut point = vec![0.0; gspace.len()];
                point[0] = 1.0;
                if check_invariance(&gspace, &point).unwrap() {
                    return Err("point mass accepted as invariant".into());
                }
            }
            Ok("100 seeded pairs tracial at 1e-10; point mass rejected".into())
        },
    )
}

fn criterion_11() -> Outcome {
    run_criterion(
        Criterion {
            number: 11,
            title: "Leavitt rewriting: defining relations, associativity, omega",
            budget: Duration::from_secs(30),
        },
        || {
            for d in [2u32, 3] {
                let one = Lq::one(d).unwrap();
                for j in 0..d as u8 {
                    for k in 0..d as u8 {
                        let prod = Lq::t(d, j).unwrap().multiply(&Lq::s(d, k).unwrap()).unwrap();
                        let expect = if j == k { one.clone() } else { Lq::zero(d).unwrap() };
                        if prod != expect {
                            return Err(format!("d={d}: t_{j} s_{k} wrong"));
                        }
                    }
                }
                let mut acc = Lq::zero(d).unwrap();
                for j in 0..d as u8 {
                    acc = acc
                        .add(&Lq::s(d, j).unwrap().multiply(&Lq::t(d, j).unwrap()).unwrap())
                        .unwrap();
                }
                if acc != one {
                    return Err(format!("d={d}: sum s_j t_j != 1"));
                }
                // omega multiplicativity on all matrix-unit pairs
                for j in 0..d as u8 {
                    for k in 0..d as u8 {
                        for l in 0..d as u8 {
                            for m in 0..d as u8 {
                                let ejk = omega(d, &|a, b| {
                                    if (a, b) == (j, k) { gq_one() } else { gq(0, 0) }
                                })
                                .unwrap();
                                let elm = omega(d, &|a, b| {
                                    if (a, b) == (l, m) { gq_one() } else { gq(0, 0) }
                                })
                                .unwrap();
                                let prod = ejk.multiply(&elm).unwrap();
                                let expect = if k == l {
                                    omega(d, &|a, b| {
                                        if (a, b) == (j, m) { gq_one() } else { gq(0, 0) }
                                    })
                                    .unwrap()
                                } else {
                                    Lq::zero(d).unwrap()
                                };
                                if prod != expect {
                                    return Err(format!("d={d}: omega(e_{j}{k}) omega(e_{l}{m})"));
                                }
                            }
                        }
                    }
                }
            }
            let assoc = leavitt_associativity(&VerifyConfig::default());
            if !assoc.pass {
                return Err(assoc.detail);
            }
            Ok(format!("relations and omega exact; {}", assoc.detail))
        },
    )
}

fn criterion_12() -> Outcome {
    run_criterion(
        Criterion {
            number: 12,
            title: "norm machinery: oracle agreement, tensor, decay, l1 obstruction",
            budget: Duration::from_secs(180),
        },
        || {
            let cfg = VerifyConfig::default();
            for check in [
                opnorm_power_vs_oracle(&cfg),
                opnorm_tensor_multiplicativity(&cfg),
                opnorm_finite_section_decay(&cfg),
                opnorm_l1_obstruction(&cfg),
            ] {
                if !check.pass {
                    return Err(format!("{}: {}", check.name, check.detail));
                }
            }
            Ok("oracle agreement at 1e-6, tensor, decay, and obstruction all hold".into())
        },
    )
}

fn criterion_13() -> Outcome {
    run_criterion(
        Criterion {
            number: 13,
            title: "limits are stated: non-exact norms are labeled lower bounds",
            budget: Duration::from_secs(30),
        },
        || {
            let dir = std::env::temp_dir().join(format!("lplab-acceptance-{}", std::process::id()));
            std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
            // general-p matrix norms are reported as certified lower bounds
            let matrix = dir.join("m.json");
            std::fs::write(
                &matrix,
                r#"{"domain": {"atoms": ["0","1"], "weights": [1.0, 1.0]},
                    "codomain": {"atoms": ["0","1"], "weights": [1.0, 1.0]},
                    "entries": [[[1,0],[1,0]],[[0,0],[1,0]]]}"#,
            )
            .map_err(|e| e.to_string())?;
            let (code, v) = lplab(&["opnorm", "--matrix", matrix.to_str().unwrap(), "--p", "1.5"])?;
            if code != 0 || v["certified_lower_bound"] != serde_json::Value::Bool(true) {
                return Err("opnorm output does not certify a lower bound".into());
            }
            // windowed Cuntz-algebra norms never claim exactness
            let element = dir.join("x.json");
            std::fs::write(&element, r#"[{"mu": [0], "nu": [], "c": [1,0]}]"#)
                .map_err(|e| e.to_string())?;
            let (code, v) = lplab(&[
                "leavitt", "norm", "--d", "2", "--p", "1.5",
                "--element", element.to_str().unwrap(),
                "--windows", "4,8",
            ])?;
            if code != 0 || v["exact"] != serde_json::Value::Bool(false) {
                return Err("leavitt norm output claims exactness".into());
            }
            let semantics = v["semantics"].as_str().unwrap_or("");
            if !semantics.contains("lower bounds") {
                return Err("leavitt norm output does not state the lower-bound semantics".into());
            }
            // K1 triviality is labeled an arithmetic consequence
            let (_, v) = lplab(&["ktheory", "od", "--d", "3"])?;
            let semantics = v["semantics"].as_str().unwrap_or("");
            if !semantics.contains("no independent finite witness") {
                return Err("K-theory output does not state the K1 caveat".into());
            }
            std::fs::remove_dir_all(&dir).ok();
            Ok("lower-bound and arithmetic-consequence labels present in outputs".into())
        },
    )
}

#[test]
fn acceptance_suite() {
    let total = Instant::now();
    let outcomes = vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
        criterion_11(),
        criterion_12(),
        criterion_13(),
    ];
    println!("acceptance total: {:?}", total.elapsed());
    let failures: Vec<String> = outcomes
        .iter()
        .filter(|o| !o.pass)
        .map(|o| format!("criterion {} ({}): {}", o.number, o.title, o.detail))
        .collect();
    assert!(failures.is_empty(), "failed criteria:\n{}", failures.join("\n"));
}
