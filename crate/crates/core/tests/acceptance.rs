//! Acceptance suite: one PASS/FAIL line per criterion. Exact comparisons
//! only; every expected value is computed independently of the code path
//! under test. The run fails on any failure except a documented one that
//! still fails in exactly the documented way.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use cpw_core::algebra::rational::{factorial, q, qq, sign_pow};
use cpw_core::algebra::special::legendre_in;
use cpw_core::algebra::{legendre, pochhammer, Monomial, MultiPoly, Rational};
use cpw_core::exotic::{
    build_structure, channel_coefficient, chiral_factor_series, closed_form_2d, double_sum_form,
    f_polynomial, g_series, positivity_report, pw4_expand, pw4_residual, restrict_2d, verify_g_biharmonic,
    ChannelStructure, ClosedForm2d, GMethod, StructureName, Weighting,
};
use cpw_core::intertwiners::ctable::e_polynomial;
use cpw_core::intertwiners::tensor::{generator_vars, twist_zero_closed_form};
use cpw_core::intertwiners::{
    assemble_tensor_intertwiner, box_v, chiral_e, chiral_pde_residual, f_delta, harmonic_project,
    reduce_wave, solve_c_table, solve_intertwiner_space, ReductionOutcome, WavePair,
};
use cpw_core::waves::{casimir_residual, prop1_series, CasimirEquation, WaveSpec};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Random rational `p/q` with `|p| <= 9`, `1 <= q <= 6`.
fn rand_q(rng: &mut ChaCha8Rng) -> Rational {
    qq(rng.gen_range(-9..=9), rng.gen_range(1..=6))
}

/// Random rational in `(0, 5]`, so `(2a)_l` never vanishes.
fn rand_pos(rng: &mut ChaCha8Rng) -> Rational {
    qq(rng.gen_range(1..=20), rng.gen_range(1..=4))
}

fn criterion_1() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for set in 0..5 {
        let d: Vec<Rational> = (0..4).map(|_| rand_q(&mut rng)).collect();
        let a = rand_pos(&mut rng);
        let spec = WaveSpec::new(d.clone(), vec![a.clone()]).map_err(|e| e.to_string())?;
        let w = prop1_series(&spec, 12).map_err(|e| e.to_string())?;
        let b = &a + &d[0] - &d[1];
        let c = &a + &d[3] - &d[2];
        let two_a = &a * q(2);
        for l in 0..=12u32 {
            let want = pochhammer(&b, l) * pochhammer(&c, l) / (factorial(l) * pochhammer(&two_a, l));
            let got = w.series.coeff(&[l]);
            ensure(got == want, || format!("set {set}, l = {l}: {got} != {want}"))?;
        }
    }
    Ok(())
}

fn criterion_2() -> Check {
    let sets = [
        (
            vec![qq(1, 2), qq(4, 3), qq(5, 7), qq(9, 4), qq(2, 5), qq(7, 6)],
            vec![qq(11, 5), qq(13, 6), qq(17, 7)],
        ),
        (
            vec![qq(3, 5), qq(-1, 3), qq(8, 7), qq(5, 2), qq(1, 9), qq(4, 3)],
            vec![qq(19, 8), qq(7, 3), qq(23, 9)],
        ),
    ];
    for (i, (d, a)) in sets.iter().enumerate() {
        let spec = WaveSpec::new(d.clone(), a.clone()).map_err(|e| e.to_string())?;
        let w = prop1_series(&spec, 8).map_err(|e| e.to_string())?;
        for k in 1..=3u8 {
            let r = casimir_residual(&w, &CasimirEquation::new(k), 8).map_err(|e| e.to_string())?;
            ensure(r.is_zero(), || {
                format!("set {i}, equation {k}: residual of order {:?}", r.order())
            })?;
            let wrong = &spec.a(k as usize + 1) + qq(1, 3);
            let bad = casimir_residual(&w, &CasimirEquation::with_eigen_dimension(k, wrong), 8)
                .map_err(|e| e.to_string())?;
            ensure(bad.order() == Some(0), || {
                format!(
                    "set {i}, equation {k}: wrong eigenvalue gives residual order {:?}",
                    bad.order()
                )
            })?;
        }
    }
    Ok(())
}

fn criterion_3() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for h in 1..=6 {
        for _ in 0..3 {
            let (d1, d2) = (rand_q(&mut rng), rand_q(&mut rng));
            let op = chiral_e(h, &d1, &d2);
            ensure(chiral_pde_residual(&op).is_zero(), || {
                format!("chiral E_{h} at ({d1}, {d2})")
            })?;
        }
    }
    for kappa in 0..=2 {
        for l in 0..=4 {
            let op = assemble_tensor_intertwiner(kappa, l).map_err(|e| e.to_string())?;
            ensure(!op.is_zero() || (kappa, l) == (0, 1), || {
                format!("assembled ({kappa}, {l}) is zero")
            })?;
            ensure(op.pde_residual().iter().all(|r| r.is_zero()), || {
                format!("assembled operator ({kappa}, {l})")
            })?;
        }
    }
    let sets = [(1, 2, q(1), q(1)), (1, 0, q(3), q(1)), (2, 1, qq(1, 2), qq(5, 2))];
    for (kappa, l, d1, d2) in sets {
        let basis = solve_intertwiner_space(kappa, l, &d1, &d2).map_err(|e| e.to_string())?;
        ensure(!basis.is_empty(), || {
            format!("empty space at ({kappa}, {l}, {d1}, {d2})")
        })?;
        for op in &basis {
            ensure(op.pde_residual().iter().all(|r| r.is_zero()), || {
                format!("kernel element at ({kappa}, {l}, {d1}, {d2})")
            })?;
        }
    }
    Ok(())
}

/// Failing `(a, h)` sub-cases of the 3-point part.
fn three_point_failures() -> Result<Vec<(i64, u32)>, String> {
    let mut bad = Vec::new();
    for a in 1..=5i64 {
        for h in 1..=5u32 {
            let spec = WaveSpec::new(vec![qq(1, 3), qq(5, 2), q(a)], vec![]).map_err(|e| e.to_string())?;
            let w = prop1_series(&spec, 0).map_err(|e| e.to_string())?;
            let r = reduce_wave(&w, WavePair::First, h).map_err(|e| e.to_string())?;
            let ok = match r.outcome {
                ReductionOutcome::Multiple(c) => h as i64 == a && !c.is_zero(),
                ReductionOutcome::Zero => h as i64 != a,
                ReductionOutcome::Mismatch { .. } => false,
            };
            if !ok {
                bad.push((a, h));
            }
        }
    }
    Ok(bad)
}

fn reduces_to_lower_wave(dims: Vec<Rational>, proj: Vec<Rational>, pair: WavePair, h: u32) -> Check {
    let spec = WaveSpec::new(dims, proj).map_err(|e| e.to_string())?;
    let w = prop1_series(&spec, 6 + h).map_err(|e| e.to_string())?;
    let r = reduce_wave(&w, pair, h).map_err(|e| e.to_string())?;
    ensure(r.compared_order == 6, || {
        format!("compared only to order {}", r.compared_order)
    })?;
    ensure(matches!(r.outcome, ReductionOutcome::Multiple(_)), || {
        format!("n = {} {pair:?} at h = {h}: {:?}", spec.n(), r.outcome)
    })
}

/// Returns `Ok(None)` on a full pass and `Ok(Some(sub-cases))` when only
/// 3-point sub-cases fail.
fn criterion_4() -> Result<Option<Vec<(i64, u32)>>, String> {
    reduces_to_lower_wave(
        vec![q(1), qq(1, 2), q(2), qq(3, 2)],
        vec![q(2)],
        WavePair::First,
        2,
    )?;
    reduces_to_lower_wave(
        vec![qq(2, 3), qq(7, 4), qq(1, 5), q(1)],
        vec![q(3)],
        WavePair::First,
        3,
    )?;
    let five = vec![qq(1, 2), qq(3, 2), q(1), qq(5, 2), q(2)];
    reduces_to_lower_wave(five.clone(), vec![q(2), q(3)], WavePair::First, 2)?;
    reduces_to_lower_wave(five, vec![q(2), q(3)], WavePair::Last, 3)?;
    let bad = three_point_failures()?;
    Ok((!bad.is_empty()).then_some(bad))
}

fn criterion_5() -> Check {
    for l in 0..=6 {
        let op = assemble_tensor_intertwiner(0, l).map_err(|e| e.to_string())?;
        let closed = twist_zero_closed_form(l).map_err(|e| e.to_string())?;
        let prop = match op.poly.ratio_to(&closed) {
            Some(c) => !c.is_zero() || closed.is_zero(),
            None => false,
        };
        ensure(prop, || {
            format!("kappa = 0, L = {l} not proportional to the closed form")
        })?;
        let f = f_delta(1, l, 0).map_err(|e| e.to_string())?.poly;
        ensure(f == legendre(l).scale(&factorial(l)), || {
            format!("f(1, {l}; 0) != L! P_L")
        })?;
    }
    // (1 + p/2 (r-1) d_r + q/2 (1+r) d_r) P_L(r) with seed 1/L!
    let vars: Vec<String> = vec!["p".into(), "q".into(), "r".into()];
    let p = MultiPoly::var_index(&vars, 0);
    let qv = MultiPoly::var_index(&vars, 1);
    let r = MultiPoly::var_index(&vars, 2);
    let one = MultiPoly::one_in(&vars);
    for l in 0..=6 {
        let pl = legendre_in(l, "r").embed(&vars).map_err(|e| e.to_string())?;
        let dp = pl.differentiate(2);
        let want = &(&pl + &(&(&p * &(&r - &one)) * &dp).scale(&qq(1, 2)))
            + &(&(&qv * &(&r + &one)) * &dp).scale(&qq(1, 2));
        let t = solve_c_table(1, l, &(q(1) / factorial(l))).map_err(|e| e.to_string())?;
        let got = e_polynomial(&t).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("twist-2 table at L = {l}"))?;
    }
    Ok(())
}

/// Random polynomial of v-degree `vdeg` and derivative degree `der`
/// (`der >= vdeg`, same parity) in the invariant generators.
fn random_homogeneous(rng: &mut ChaCha8Rng, vdeg: u32, der: u32) -> MultiPoly {
    let vars = generator_vars();
    let mut p = MultiPoly::zero_owned(vars);
    for _ in 0..rng.gen_range(1..=5) {
        let big_v = rng.gen_range(0..=vdeg / 2);
        let s = vdeg - 2 * big_v;
        let s1 = rng.gen_range(0..=s);
        let pairs = (der - s) / 2;
        let t = rng.gen_range(0..=pairs);
        let b1 = rng.gen_range(0..=pairs - t);
        let b2 = pairs - t - b1;
        let mut c = rand_q(rng);
        if c.is_zero() {
            c = q(1);
        }
        p.add_term(Monomial(vec![t, b1, b2, s1, s - s1, big_v]), c);
    }
    p
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let vars = generator_vars();
    let big_v = MultiPoly::var_index(&vars, 5);
    for i in 0..20 {
        let vdeg = rng.gen_range(0..=6);
        let der = vdeg + 2 * rng.gen_range(0..=2);
        let p = random_homogeneous(&mut rng, vdeg, der);
        let hp = harmonic_project(&p).map_err(|e| e.to_string())?;
        ensure(box_v(&hp).is_zero(), || {
            format!("sample {i}: box_v of the projection is nonzero")
        })?;
        let qdeg = rng.gen_range(0..=4);
        let qder = qdeg + 2 * rng.gen_range(0..=2);
        let qp = random_homogeneous(&mut rng, qdeg, qder);
        let trace = harmonic_project(&(&big_v * &qp)).map_err(|e| e.to_string())?;
        ensure(trace.is_zero(), || {
            format!("sample {i}: projection of V Q is nonzero")
        })?;
    }
    Ok(())
}

fn criterion_7() -> Check {
    let rec = g_series(12, GMethod::Recursion).map_err(|e| e.to_string())?;
    let closed = g_series(12, GMethod::Closed).map_err(|e| e.to_string())?;
    ensure(rec == closed, || "recursion and closed methods differ".into())?;
    for a in 1..=11u32 {
        for b in 1..=12 - a {
            let n = q((a + b) as i64);
            let want = q(2 * a as i64 * b as i64) / (&n * (&n * &n - q(1)));
            ensure(rec.coeff(a, b) == want, || format!("g coefficient ({a}, {b})"))?;
        }
    }
    let g14 = g_series(14, GMethod::Recursion).map_err(|e| e.to_string())?;
    let r = verify_g_biharmonic(&g14).map_err(|e| e.to_string())?;
    ensure(r.valid_order >= 11 && r.residual.is_zero(), || {
        format!("biharmonic residual nonzero through order {}", r.valid_order)
    })
}

/// `chi_odd(h+ - h-)` times 2, with the helicity sign for `H`.
fn expected_coefficient(hp: u32, hm: u32, w: Weighting) -> Rational {
    let h = hp as i64 - hm as i64;
    if h.rem_euclid(2) == 0 {
        return Rational::zero();
    }
    match w {
        Weighting::B => q(2),
        Weighting::H => q(2 * h.signum()),
    }
}

fn criterion_8() -> Check {
    for w in [Weighting::B, Weighting::H] {
        for hp in 1..=6 {
            for hm in 1..=6 {
                let got = channel_coefficient(hp, hm, w).map_err(|e| e.to_string())?;
                let want = expected_coefficient(hp, hm, w);
                ensure(got == want, || {
                    format!("{w:?}({hp}, {hm}) = {got}, expected {want}")
                })?;
            }
        }
    }
    for h in 1..=8u32 {
        let f = f_polynomial(h).map_err(|e| e.to_string())?;
        let z = MultiPoly::var_index(f.vars(), 0);
        let arg = &MultiPoly::one_in(f.vars()) - &z.scale(&q(2));
        let p = legendre_in(h - 1, "z")
            .substitute(0, &arg)
            .map_err(|e| e.to_string())?;
        ensure(f == p, || format!("F != P_(h-1)(1-2z) at h = {h}"))?;
        ensure(f.evaluate(&[q(1)]) == sign_pow(h as i64 - 1), || {
            format!("F(1) at h = {h}")
        })?;
    }
    Ok(())
}

fn criterion_9() -> Check {
    let bme = build_structure(StructureName::BMinusHalfE).map_err(|e| e.to_string())?;
    let r = restrict_2d(&bme).map_err(|e| e.to_string())?;
    ensure(closed_form_2d(&r, ClosedForm2d::BMinusHalfE), || {
        "B - E/2 closed form".into()
    })?;
    let b = build_structure(StructureName::B).map_err(|e| e.to_string())?;
    let rb = restrict_2d(&b).map_err(|e| e.to_string())?;
    ensure(closed_form_2d(&rb, ClosedForm2d::B), || "B closed form".into())?;
    let factor = chiral_factor_series(StructureName::B, 10).map_err(|e| e.to_string())?;
    ensure(factor == double_sum_form(StructureName::B, 10), || {
        "B factor differs from the double sum at cap 10".into()
    })
}

fn criterion_10() -> Check {
    for h in 1..=3u32 {
        for hp in 1..=3u32 {
            let m = pw4_expand(h, hp, 12).map_err(|e| e.to_string())?;
            let res = pw4_residual(&m).map_err(|e| e.to_string())?;
            ensure(res.is_zero() && res.cap() >= 12, || {
                format!("residual at ({h}, {hp})")
            })?;
            // u^0 and u^1 of 1 = B0 F(h,h';3) + B1 u F(h+1,h'+1;5): B0 = 1, B1 = -h h'/3
            ensure(m.entries[0] == q(1), || format!("B^(3/2) at ({h}, {hp})"))?;
            let want = q(-((h * hp) as i64)) / q(3);
            ensure(m.entries[1] == want, || {
                format!("B^(5/2) at ({h}, {hp}) = {}", m.entries[1])
            })?;
        }
    }
    Ok(())
}

fn criterion_11() -> Check {
    for s in [ChannelStructure::B, ChannelStructure::H, ChannelStructure::E] {
        let small = positivity_report(s, 3, 1).map_err(|e| e.to_string())?;
        let big = positivity_report(s, 5, 3).map_err(|e| e.to_string())?;
        for rep in [&small, &big] {
            for b in &rep.blocks {
                ensure(b.is_symmetric(), || {
                    format!("{s:?} block {:?} asymmetric", (b.n_plus, b.n_minus))
                })?;
                let i = b.inertia;
                ensure(i.positive + i.negative + i.zero == b.labels.len(), || {
                    format!("{s:?} block {:?} inertia sum", (b.n_plus, b.n_minus))
                })?;
            }
        }
        ensure(small.is_truncation_of(&big), || format!("{s:?} truncation"))?;
    }
    // twist-2 part of E: every equal-sign block has vanishing diagonal
    let e = positivity_report(ChannelStructure::E, 5, 3).map_err(|e| e.to_string())?;
    ensure(e.blocks.iter().all(|b| b.diagonal_vanishes()), || {
        "E diagonal does not vanish".into()
    })
}

enum Verdict {
    Pass,
    Fail(String),
    /// Fails in the documented way only.
    KnownFail(String),
}

fn run<F: FnOnce() -> Check>(f: F) -> Verdict {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => Verdict::Pass,
        Ok(Err(m)) => Verdict::Fail(m),
        Err(_) => Verdict::Fail("panicked".into()),
    }
}

fn main() -> ExitCode {
    let simple: [(u32, fn() -> Check); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
    ];
    let mut verdicts: Vec<(u32, Verdict, f64)> = Vec::new();
    for (n, f) in simple {
        let t = Instant::now();
        verdicts.push((n, run(f), t.elapsed().as_secs_f64()));
    }
    let t = Instant::now();
    let v4 = match catch_unwind(criterion_4) {
        Ok(Ok(None)) => Verdict::Pass,
        // E_1 is a total derivative; see the h = 1 note in the README
        Ok(Ok(Some(bad))) if bad == [(1, 1)] => Verdict::KnownFail(
            "3-point a = h = 1: iota o E_1 vanishes because E_1 is a total derivative; \
             all other (a, h) and the n = 4, 5 reductions pass"
                .into(),
        ),
        Ok(Ok(Some(bad))) => Verdict::Fail(format!("3-point sub-cases {bad:?}")),
        Ok(Err(m)) => Verdict::Fail(m),
        Err(_) => Verdict::Fail("panicked".into()),
    };
    verdicts.push((4, v4, t.elapsed().as_secs_f64()));
    verdicts.sort_by_key(|v| v.0);

    let mut unexpected = 0;
    for (n, v, secs) in &verdicts {
        match v {
            Verdict::Pass => println!("criterion {n}: PASS ({secs:.1}s)"),
            Verdict::KnownFail(m) => println!("criterion {n}: FAIL ({secs:.1}s) known: {m}"),
            Verdict::Fail(m) => {
                unexpected += 1;
                println!("criterion {n}: FAIL ({secs:.1}s) {m}");
            }
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
