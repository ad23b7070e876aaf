//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.
//!
//! Expected values are computed here by hand (gcds, minima, sums) or come from the
//! breadth-first oracle, never from the code under test.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lagtor::ambient::{group_ga, is_special, shift_equiv, ManifoldDescriptor, ShiftVerdict};
use lagtor::invariants::{displacement_energy, equiv, obstruct_ball, perturbed_energy, torus_invariants, BallVerdict, TorusSpec};
use lagtor::numlab::{area_line_annulus, isoperimetric_check, suite, LoopSample};
use lagtor::oracle::{bfs_low_path, DEFAULT_NODE_CAP};
use lagtor::pathengine::{
    certificate, certificate_from_path, check_certificate, check_path, is_low_admissible, low_path, path_rank2_k2, CheckFailure,
    FailureClass, IsotopyCertificate, Move, MoveKind, MovePath, StepKind,
};
use lagtor::{Rat, SymBasis, SymReal, Symbol, ZModule};

type Outcome = Result<String, String>;

fn rat(p: i64, q: i64) -> Rat {
    Rat::new(p.into(), q.into())
}

fn ints(b: &Arc<SymBasis>, x: &[i64]) -> Vec<SymReal> {
    x.iter().map(|&y| SymReal::from_int(b, y)).collect()
}

fn constant(x: &SymReal) -> Rat {
    assert!(x.coeffs()[1..].iter().all(|c| *c == rat(0, 1)));
    x.coeffs()[0].clone()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>, what: &str) -> Result<T, String> {
    r.map_err(|err| format!("{}: {}", what, err))
}

fn best_of<T>(runs: usize, mut f: impl FnMut() -> T) -> (T, Duration) {
    let mut best = Duration::MAX;
    let mut out = None;
    for _ in 0..runs {
        let t = Instant::now();
        out = Some(f());
        best = best.min(t.elapsed());
    }
    (out.unwrap(), best)
}

// 1 ----------------------------------------------------------------------------------------

fn criterion1() -> Outcome {
    let b = SymBasis::trivial();
    let t = |x: &[i64]| TorusSpec::from_ints(&b, x).unwrap();
    let one = ZModule::from_generators(&b, &ints(&b, &[1])).unwrap();
    let two = ZModule::from_generators(&b, &ints(&b, &[2])).unwrap();
    let mut slowest = Duration::ZERO;

    let (inv, dt) = best_of(5, || torus_invariants(&t(&[1, 2, 3])));
    slowest = slowest.max(dt);
    let inv = e(inv, "invariants(1,2,3)")?;
    // ua = min, |a| = 1+2+3, ‖a‖ = |a| + ua, Γ = <1, 2> = Z
    ensure(
        constant(&inv.ua) == rat(1, 1) && inv.m == 1 && constant(&inv.total) == rat(6, 1) && constant(&inv.norm) == rat(7, 1),
        || format!("invariants of (1,2,3): {:?}", inv),
    )?;
    ensure(inv.gamma == one, || "Γ(1,2,3) is not Z".into())?;

    let (inv, dt) = best_of(5, || torus_invariants(&t(&[1, 3, 5])));
    slowest = slowest.max(dt);
    ensure(e(inv, "invariants(1,3,5)")?.gamma == two, || "Γ(1,3,5) is not 2Z".into())?;

    let gcd3 = |x: &[i64]| {
        let m = *x.iter().min().unwrap();
        x.iter().fold(0i64, |g, &y| g.gcd(&(y - m)))
    };
    for (x, y, want) in [([1, 3, 5], [1, 3, 3], gcd3(&[1, 3, 5]) == gcd3(&[1, 3, 3])), ([1, 2, 3], [1, 3, 5], gcd3(&[1, 2, 3]) == gcd3(&[1, 3, 5]))] {
        let (r, dt) = best_of(5, || equiv(&t(&x), &t(&y)));
        slowest = slowest.max(dt);
        ensure(e(r, "equiv")? == want, || format!("equiv({:?}, {:?}) should be {}", x, y, want))?;
    }
    ensure(slowest < Duration::from_millis(1), || format!("slowest call took {:?}", slowest))?;
    Ok(format!("exact values match, slowest call {:?}", slowest))
}

// 2 ----------------------------------------------------------------------------------------

fn criterion2() -> Outcome {
    let b = SymBasis::trivial();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let c = |r: &Rat| SymReal::constant(&b, r.clone());
    for trial in 0..100 {
        let k = rng.gen_range(1..=6);
        let a: Vec<Rat> = (0..k).map(|_| rat(rng.gen_range(1..=60), rng.gen_range(1..=12))).collect();
        let ua = a.iter().min().unwrap().clone();
        let norm: Rat = a.iter().sum::<Rat>() + &ua;
        let cap = &norm + rat(rng.gen_range(0..=20), rng.gen_range(1..=5));
        let t = e(TorusSpec::new(a.iter().map(c).collect(), Some(c(&cap))), "torus")?;
        let got = e(displacement_energy(&t), "energy")?;
        ensure(constant(&got) == ua, || format!("trial {}: e(T({:?})) = {}, expected {}", trial, a, got, ua))?;

        // |s_i| <= ua/4 keeps every component positive; the capacity covers ‖a + s‖
        let s: Vec<Rat> = (0..k).map(|_| &ua * rat(rng.gen_range(-25..=25), 100)).collect();
        let want = a.iter().zip(&s).map(|(x, y)| x + y).min().unwrap();
        let cap = &norm + &ua * rat(k as i64 + 1, 4);
        let t = e(TorusSpec::new(a.iter().map(c).collect(), Some(c(&cap))), "torus")?;
        let got = e(perturbed_energy(&t, &s.iter().map(c).collect::<Vec<_>>()), "perturbed energy")?;
        ensure(constant(&got) == want, || format!("trial {}: e(a+s) = {}, expected {}", trial, got, want))?;
    }
    Ok("100 + 100 random vectors agree exactly".into())
}

// 3 and 5 ----------------------------------------------------------------------------------

/// Lifts a path between `d` and `e` to the tori (1, 1+d), (1, 1+e) and checks the certificate
/// bound against norms summed here: ‖(1, 1+x)‖ = 1 + Σ(1 + x_i) + 1.
fn lifted_bound(basis: &Arc<SymBasis>, d: &[SymReal], e_: &[SymReal], path: &MovePath) -> Result<IsotopyCertificate, String> {
    let one = SymReal::from_int(basis, 1);
    let lift = |x: &[SymReal]| -> Vec<SymReal> {
        let mut v = vec![one.clone()];
        v.extend(x.iter().map(|y| y.add(&one).unwrap()));
        v
    };
    let norm = |x: &[SymReal]| -> SymReal {
        x.iter().fold(SymReal::from_int(basis, x.len() as i64 + 2), |s, y| s.add(y).unwrap())
    };
    let cert = e(certificate_from_path(&lift(d), &lift(e_), path), "certificate")?;
    let (nd, ne) = (norm(d), norm(e_));
    let bound = if e(nd.cmp(&ne), "cmp")?.is_lt() { ne } else { nd };
    ensure(!e(cert.overall_ball.cmp(&bound), "cmp")?.is_gt(), || {
        format!("overall ball {} exceeds {} for {:?} -> {:?}", cert.overall_ball, bound, d, e_)
    })?;
    Ok(cert)
}

fn criterion3_and_5() -> (Outcome, Result<usize, String>) {
    let b = SymBasis::trivial();
    let start = Instant::now();
    let mut count = 0usize;
    let mut certs = 0usize;
    let mut cert_err: Option<String> = None;
    let mut run = || -> Result<(), String> {
        for k in 1..=3u32 {
            let all: Vec<Vec<i64>> = (0..10i64.pow(k))
                .map(|n| (0..k).map(|p| (n / 10i64.pow(p)) % 10 + 1).collect())
                .collect();
            let g = |x: &[i64]| x.iter().fold(0i64, |acc, y| acc.gcd(y));
            for d in &all {
                for e_ in &all {
                    let same = g(d) == g(e_);
                    if !same && k == 3 {
                        continue;
                    }
                    let (dv, ev) = (ints(&b, d), ints(&b, e_));
                    let oracle = e(bfs_low_path(d, e_, DEFAULT_NODE_CAP), "bfs")?.is_some();
                    if !same {
                        // both sides must agree that no low path exists
                        ensure(!oracle && low_path(&dv, &ev).is_err(), || format!("{:?} -> {:?}: existence disagrees", d, e_))?;
                        continue;
                    }
                    count += 1;
                    let p = e(low_path(&dv, &ev), &format!("low_path {:?} -> {:?}", d, e_))?;
                    ensure(oracle, || format!("{:?} -> {:?}: oracle finds no path", d, e_))?;
                    ensure(e(is_low_admissible(&p, &dv, &ev), "is_low_admissible")?, || format!("{:?} -> {:?}: not low", d, e_))?;
                    if cert_err.is_none() {
                        match lifted_bound(&b, &dv, &ev, &p) {
                            Ok(_) => certs += 1,
                            Err(m) => cert_err = Some(m),
                        }
                    }
                }
            }
        }
        Ok(())
    };
    let res = run();
    let dt = start.elapsed();
    let c3 = res.and_then(|()| {
        ensure(dt < Duration::from_secs(300), || format!("sweep took {:.1?}", dt))?;
        Ok(format!("{} gcd-equal instances, all low and confirmed by BFS, in {:.1?}", count, dt))
    });
    let c5 = match cert_err {
        Some(m) => Err(m),
        None => Ok(certs),
    };
    (c3, c5)
}

// 4 ----------------------------------------------------------------------------------------

fn criterion4(certs: &mut usize) -> Outcome {
    let basis = SymBasis::with_symbols(vec![Symbol::new("beta", rat(141, 100), rat(142, 100))]).unwrap();
    let beta = SymReal::symbol(&basis, 1);
    let one = SymReal::from_int(&basis, 1);
    let d = vec![one.clone(), beta.clone()];
    let gens: [[[i64; 2]; 2]; 6] =
        [[[0, 1], [1, 0]], [[1, 1], [0, 1]], [[1, -1], [0, 1]], [[1, 0], [1, 1]], [[1, 0], [-1, 1]], [[-1, 0], [0, 1]]];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut slowest = Duration::ZERO;
    for trial in 0..200 {
        let mut a = [[1i64, 0], [0, 1]];
        for _ in 0..rng.gen_range(0..=6) {
            let g = gens[rng.gen_range(0..gens.len())];
            a = [
                [g[0][0] * a[0][0] + g[0][1] * a[1][0], g[0][0] * a[0][1] + g[0][1] * a[1][1]],
                [g[1][0] * a[0][0] + g[1][1] * a[1][0], g[1][0] * a[0][1] + g[1][1] * a[1][1]],
            ];
        }
        // e = |A d|, the sign read off at β = √2
        let e_: Vec<SymReal> = a
            .iter()
            .map(|row| {
                let sign = if row[0] as f64 + row[1] as f64 * 2f64.sqrt() < 0.0 { -1 } else { 1 };
                one.scale_int(&BigInt::from(sign * row[0])).add(&beta.scale_int(&BigInt::from(sign * row[1]))).unwrap()
            })
            .collect();
        let t = Instant::now();
        let p = e(path_rank2_k2(&d, &e_), &format!("trial {} (A = {:?})", trial, a))?;
        slowest = slowest.max(t.elapsed());
        ensure(e(is_low_admissible(&p, &d, &e_), "is_low_admissible")?, || format!("trial {}: not low", trial))?;
        let verdict = e(check_path(&d, p.moves(), Some(&e_)), "check_path")?;
        ensure(verdict.is_none(), || format!("trial {}: checker says {}", trial, verdict.unwrap()))?;
        lifted_bound(&basis, &d, &e_, &p)?;
        *certs += 1;
    }
    ensure(slowest < Duration::from_secs(1), || format!("slowest instance took {:?}", slowest))?;
    Ok(format!("200 symbolic instances verified low, slowest {:?}", slowest))
}

fn criterion5(sweep: Result<usize, String>, symbolic: usize) -> Outcome {
    let swept = sweep?;
    let b = SymBasis::trivial();
    let t = |x: &[i64]| TorusSpec::from_ints(&b, x).unwrap();
    let c = e(certificate(&t(&[1, 3, 5]), &t(&[1, 3, 3])), "certificate")?;
    // ‖(1,3,5)‖ = 9 + 1
    ensure(constant(&c.overall_ball) == rat(10, 1), || format!("overall ball {} instead of 10", c.overall_ball))?;
    ensure(e(check_certificate(&c), "check")?.is_none(), || "certificate for (1,3,5) -> (1,3,3) rejected".into())?;
    Ok(format!("{} lifted certificates within max(‖a‖, ‖a'‖); (1,3,5) -> (1,3,3) has ball 10", swept + symbolic))
}

// 6 ----------------------------------------------------------------------------------------

fn criterion6() -> Outcome {
    let b = SymBasis::trivial();
    let t = |x: &[i64]| TorusSpec::from_ints(&b, x).unwrap();
    let (x, y) = (t(&[1, 3, 5]), t(&[1, 3, 3]));
    let mut balls: Vec<Rat> = Vec::new();
    for q in 1..=40 {
        for p in 0..q {
            balls.push(rat(9, 1) + rat(p, q));
        }
    }
    for j in 1..=15u32 {
        balls.push(rat(10, 1) - Rat::new(1.into(), BigInt::from(10).pow(j)));
    }
    for ball in &balls {
        let v = e(obstruct_ball(&x, &y, &SymReal::constant(&b, ball.clone())), "obstruct_ball")?;
        ensure(v == BallVerdict::Obstructed, || format!("b = {}: {:?}", ball, v))?;
    }
    let v = e(obstruct_ball(&x, &y, &SymReal::from_int(&b, 10)), "obstruct_ball")?;
    ensure(v == BallVerdict::CertifiablyIsotopic, || format!("b = 10: {:?}", v))?;
    Ok(format!("Obstructed for {} values of b in [9, 10), CertifiablyIsotopic at 10", balls.len()))
}

// 7 ----------------------------------------------------------------------------------------

fn criterion7() -> Outcome {
    let b = SymBasis::trivial();
    let s2xs2 = e(ManifoldDescriptor::sphere_product(&SymReal::from_int(&b, 3), &SymReal::from_int(&b, 4)), "preset")?;
    ensure(e(is_special(&s2xs2), "is_special")?, || "S²(3)×S²(4) is not special".into())?;
    // G_a(S0) = (v1 - v2) Z = Z
    let z = ZModule::from_generators(&b, &ints(&b, &[3 - 4])).unwrap();
    for a in [rat(1, 1000), rat(1, 10), rat(1, 2)] {
        let g = e(group_ga(&s2xs2, &SymReal::constant(&b, a.clone()), true), "G_a(S0)")?;
        ensure(g == z, || format!("G_a(S0) at a = {} is not Z", a))?;
    }
    let (c, d, e1) = (SymReal::from_int(&b, 1), ints(&b, &[1]), ints(&b, &[2]));
    let v = e(shift_equiv(&s2xs2, &c, &d, &e1), "shift_equiv")?;
    ensure(v == ShiftVerdict::EquivalentForSmallA, || format!("S²(3)×S²(4): {:?}", v))?;
    // (a, a+1) and (a, a+2) still differ in Γ
    let small = |x: i64| vec![SymReal::constant(&b, rat(1, 10)), SymReal::constant(&b, rat(1, 10) + rat(x, 1))];
    let not_eq = !e(equiv(&TorusSpec::new(small(1), None).unwrap(), &TorusSpec::new(small(2), None).unwrap()), "equiv")?;
    ensure(not_eq, || "(a, a+1) ≃ (a, a+2)".into())?;
    let v = e(shift_equiv(&ManifoldDescriptor::aspherical(), &c, &d, &e1), "shift_equiv")?;
    ensure(matches!(v, ShiftVerdict::NotImplied { .. }), || format!("aspherical: {:?}", v))?;
    Ok("special, G_a(S0) = Z, EquivalentForSmallA; aspherical NotImplied".into())
}

// 8 ----------------------------------------------------------------------------------------

fn criterion8() -> Outcome {
    let start = Instant::now();
    let seed = 8;
    let sym = e(suite::psi_symplectic(seed, 1000), "psi")?;
    ensure(sym.observed <= 1e-9, || format!("Jacobian defect {:.3e}", sym.observed))?;
    let step1 = e(suite::step1_grid(2000), "step1")?;
    ensure(step1.observed <= 1e-9, || format!("step-1 ball excess {:.3e}", step1.observed))?;

    let area = e(area_line_annulus(1.0f64, 2.0), "annulus")?;
    let rel = (area - 3.0 * PI).abs() / (3.0 * PI);
    ensure(rel <= 1e-6, || format!("annulus area relative error {:.3e}", rel))?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    for _ in 0..200 {
        let lp = e(suite::random_loop(&mut rng, 2, 5, 4096), "loop")?;
        worst = worst.min(e(isoperimetric_check(&lp), "isoperimetric")?.slack);
    }
    ensure(worst >= -1e-6, || format!("isoperimetric slack {:.3e}", worst))?;
    let mut circle: f64 = 0.0;
    for r in [0.5, 1.0, 3.0] {
        let lp = e(
            LoopSample::from_fn(
                4096,
                |t: f64| vec![r * (2.0 * PI * t).cos(), r * (2.0 * PI * t).sin(), 0.0, 0.0],
                |t: f64| vec![-2.0 * PI * r * (2.0 * PI * t).sin(), 2.0 * PI * r * (2.0 * PI * t).cos(), 0.0, 0.0],
            ),
            "circle",
        )?;
        circle = circle.max(e(isoperimetric_check(&lp), "isoperimetric")?.slack.abs());
    }
    ensure(circle <= 1e-6, || format!("circle slack {:.3e}", circle))?;
    let dt = start.elapsed();
    ensure(dt < Duration::from_secs(60), || format!("suite took {:?}", dt))?;
    Ok(format!(
        "Jacobian {:.1e}, step-1 excess {:.1e}, annulus {:.1e}, slack min {:.1e}, circles {:.1e}, {:.1?}",
        sym.observed, step1.observed, rel, worst, circle, dt
    ))
}

// 9 ----------------------------------------------------------------------------------------

fn criterion9() -> Outcome {
    use FailureClass::*;
    let b = SymBasis::trivial();
    let t = |x: &[i64]| TorusSpec::from_ints(&b, x).unwrap();
    let one = SymReal::from_int(&b, 1);
    let pairs: [(&[i64], &[i64]); 5] =
        [(&[1, 3, 5], &[1, 3, 3]), (&[3, 1, 5], &[1, 3, 3]), (&[2, 5, 9, 4], &[2, 3, 4, 9]), (&[1, 4, 7], &[1, 10, 4]), (&[2, 3, 8], &[2, 7, 4])];
    let mut certs = Vec::new();
    for (x, y) in pairs {
        let c = e(certificate(&t(x), &t(y)), "certificate")?;
        ensure(e(check_certificate(&c), "check")?.is_none(), || format!("honest certificate {:?} -> {:?} rejected", x, y))?;
        certs.push(c);
    }
    let step2 = |c: &IsotopyCertificate| c.steps.iter().position(|s| matches!(s.kind, StepKind::Step2Apply { .. })).unwrap();

    let mut cases: Vec<(String, Option<CheckFailure>, FailureClass, Option<usize>)> = Vec::new();
    for (n, c) in certs.iter().enumerate() {
        // wrong move: the target of a move no longer matches it
        let mut m = c.clone();
        let s = step2(&m);
        let i = match m.steps[s].kind {
            StepKind::Step2Apply { i, .. } => i,
            _ => unreachable!(),
        };
        m.steps[s].to[i] = m.steps[s].to[i].add(&one).unwrap();
        cases.push((format!("cert {} wrong move", n), check_certificate(&m).unwrap(), WrongMove, Some(s + 1)));

        // inflated ball on the last step
        let mut m = c.clone();
        let last = m.steps.len() - 1;
        m.steps[last].ball = m.steps[last].ball.add(&one).unwrap();
        cases.push((format!("cert {} inflated ball", n), check_certificate(&m).unwrap(), BallMismatch, Some(last + 1)));

        // wrong endpoint: a' changed to another positive vector
        let mut m = c.clone();
        m.a_prime[0] = m.a_prime[0].add(&one).unwrap();
        cases.push((format!("cert {} wrong endpoint", n), check_certificate(&m).unwrap(), WrongEndpoint, None));
    }
    // negative components on paths: M_ij where the result is <= 0
    let neg: [(&[i64], usize, usize, usize); 5] = [(&[2, 3], 0, 0, 1), (&[2, 4], 1, 1, 0), (&[4, 6, 1], 2, 0, 1), (&[5, 5], 0, 1, 0), (&[3, 9, 2], 1, 2, 1)];
    for (start, at, i, j) in neg {
        let sv = ints(&b, start);
        let mut moves = vec![Move { kind: MoveKind::I, i: 0, j: 1 }; at];
        moves.push(Move { kind: MoveKind::M, i, j });
        cases.push((format!("path {:?} negative", start), check_path(&sv, &moves, None).unwrap(), NonPositive, Some(at + 1)));
    }
    // wrong endpoints on honest paths
    for (d, e_) in [([4i64, 6], [2i64, 2]), ([2, 3], [1, 1])] {
        let (dv, ev) = (ints(&b, &d), ints(&b, &e_));
        let p = low_path(&dv, &ev).unwrap();
        let mut bad = ev.clone();
        bad[1] = bad[1].add(&one).unwrap();
        cases.push((format!("path {:?} wrong endpoint", d), check_path(&dv, p.moves(), Some(&bad)).unwrap(), WrongEndpoint, None));
    }

    let mut problems = Vec::new();
    for (name, got, class, step) in &cases {
        match got {
            Some(f) if f.class == *class && f.step == *step => {}
            other => problems.push(format!("{}: expected {:?} at {:?}, got {:?}", name, class, step, other)),
        }
    }
    ensure(cases.len() >= 20, || format!("only {} mutations", cases.len()))?;
    ensure(problems.is_empty(), || problems.join("; "))?;
    Ok(format!("{} mutated certificates and paths rejected with the expected class", cases.len()))
}

fn main() -> ExitCode {
    let mut results: Vec<(u32, Outcome)> = vec![(1, criterion1()), (2, criterion2())];
    let (c3, sweep) = criterion3_and_5();
    results.push((3, c3));
    let mut symbolic = 0;
    results.push((4, criterion4(&mut symbolic)));
    results.push((5, criterion5(sweep, symbolic)));
    results.push((6, criterion6()));
    results.push((7, criterion7()));
    results.push((8, criterion8()));
    results.push((9, criterion9()));

    let mut failed = 0;
    for (n, r) in &results {
        match r {
            Ok(msg) => println!("criterion {}: PASS ({})", n, msg),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL ({})", n, msg);
            }
        }
    }
    if failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
