//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_traits::Zero;
use rand::Rng;
use support::buchberger::{groebner_basis, leading_monomials};
use support::*;
use toric_core::linalg::{eigen_decomposition, polynomial_roots, CMatrix};
use toric_core::poly::rat_to_f64;
use toric_core::polytope::{mixed_cells, mixed_subdivision_with_retry, mixed_volume, newton_polytope};
use toric_core::resultant::{
    canny_emiris_with_retry, koszul_bilinear_matrix, macaulay_matrix_dense, KOSZUL_COLUMNS, KOSZUL_PATTERN,
    KOSZUL_ROWS,
};
use toric_core::solver::{solve_bilinear_koszul, solve_torus, solve_torus_detailed, SolveOptions};
use toric_core::toric::{
    default_setup, dense_setup, fglm_lex, multiplication_maps, saturate, truncated_gb, F5Options, MonomialOrder,
};
use toric_core::{Exponent, PolySystem, Rat, SparsePoly};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_solve"))
        .args(args)
        .env_remove("SOLVE_SEED")
        .output()
        .expect("binary runs")
}

fn system(fs: Vec<SparsePoly>) -> PolySystem {
    PolySystem::with_default_vars(fs).unwrap()
}

fn mv(fs: &[SparsePoly]) -> u64 {
    let ps: Vec<_> = fs.iter().map(|f| newton_polytope(f).unwrap()).collect();
    mixed_volume(&ps).unwrap()
}

/// Largest relative gap under a greedy nearest matching, `None` if the sizes differ.
fn matching_gap(a: &[Complex64], b: &[Complex64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let j = (0..b.len())
            .filter(|&j| !used[j])
            .min_by(|&i, &j| (b[i] - x).norm().total_cmp(&(b[j] - x).norm()))?;
        used[j] = true;
        worst = worst.max((b[j] - x).norm() / (1.0 + x.norm()));
    }
    Some(worst)
}

fn same_values(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    matching_gap(a, b).is_some_and(|g| g <= tol)
}

fn pencil() -> PolySystem {
    PolySystem::parse(
        &["1 + 3*l + 2*w + 4*l*w", "3 - 2*l + 4*w - 4*l*w"],
        vec!["l".into(), "w".into()],
    )
    .unwrap()
}

fn bkk_pencil() -> Outcome {
    // det(A + l B) with A = [[1, 2], [3, 4]], B = [[3, 4], [-2, -4]] is -2 - 4 l^2.
    let s = 0.5f64.sqrt();
    let oracle = [Complex64::new(0.0, s), Complex64::new(0.0, -s)];

    let out = cli(&["mv", &data("pencil.json")]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    check(v["mv"] == 2, || format!("mv reported {}", v["mv"]))?;

    let start = Instant::now();
    let sol = solve_torus(&pencil(), &SolveOptions::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check(sol.points.len() == 2 && sol.count() == 2, || format!("{} points", sol.points.len()))?;
    let worst = sol.residuals.iter().copied().fold(0.0, f64::max);
    check(worst < 1e-8, || format!("residual {worst:e}"))?;
    let lambdas: Vec<Complex64> = sol.points.iter().map(|p| p[0]).collect();
    check(same_values(&lambdas, &oracle, 1e-8), || format!("eigenvalues {lambdas:?}"))?;
    check(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("mv 2, 2 points, max residual {worst:.1e}, {elapsed:.0?}"))
}

fn mixed_volume_cross_validation() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(1111);
    for trial in 0..50 {
        let supports: Vec<Vec<Exponent>> = (0..2)
            .map(|_| {
                let size = rng.gen_range(1..=6);
                random_support(&mut rng, 2, 4, size)
            })
            .collect();
        let ps: Vec<_> = supports
            .iter()
            .map(|s| toric_core::polytope::LatticePolytope::from_points(2, s.iter().cloned()).unwrap())
            .collect();
        let ie = mixed_volume(&ps).map_err(|e| e.to_string())?;
        for seed in [1, 2, 3] {
            let sub = mixed_subdivision_with_retry(&supports, 1000 * trial + seed).map_err(|e| e.to_string())?;
            let cells = mixed_cells(&sub).map_err(|e| e.to_string())?;
            check(cells.total == ie, || {
                format!("trial {trial}, seed {seed}: cells {} vs formula {ie} on {supports:?}", cells.total)
            })?;
        }
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    Ok(format!("50 pairs x 3 liftings agree, {elapsed:.1?}"))
}

fn bezout_degeneration() -> Outcome {
    let mut rng = rng(3030);
    let mut tuples: Vec<Vec<i64>> = Vec::new();
    for n in 1..=3usize {
        let mut cur = vec![1i64; n];
        loop {
            tuples.push(cur.clone());
            let Some(k) = (0..n).rev().find(|&k| cur[k] < 3) else { break };
            let v = cur[k] + 1;
            for x in cur[k..].iter_mut() {
                *x = v;
            }
        }
    }
    for degs in &tuples {
        let n = degs.len();
        let fs: Vec<SparsePoly> = degs.iter().map(|&d| random_dense(&mut rng, n, d, 50)).collect();
        let bezout: i64 = degs.iter().product();
        let m = mv(&fs);
        check(m == bezout as u64, || format!("degrees {degs:?}: mv {m}"))?;
        let sol = solve_torus(&system(fs), &SolveOptions::default()).map_err(|e| format!("{degs:?}: {e}"))?;
        check(sol.count() == bezout as usize && sol.all_within(1e-8), || {
            format!("degrees {degs:?}: {} points, {} rejected", sol.count(), sol.rejected.len())
        })?;
    }
    Ok(format!("{} degree tuples, mv and root counts equal the Bezout number", tuples.len()))
}

fn planted_root_vanishing() -> Outcome {
    let mut rng = rng(4040);
    for trial in 0..50 {
        let n = 1 + trial % 2;
        let root = random_torus_point(&mut rng, n);
        let fs: Vec<SparsePoly> = (0..=n)
            .map(|_| {
                let size = rng.gen_range(2..=4);
                let s = random_support(&mut rng, n, 2, size);
                planted_poly(&mut rng, n, &s, &root, 9)
            })
            .collect();
        let ce = canny_emiris_with_retry(&fs, trial as u64).map_err(|e| format!("trial {trial}: {e}"))?;
        let det = ce.matrix.determinant().map_err(|e| e.to_string())?;
        check(det.is_zero(), || format!("Canny-Emiris trial {trial}: det {det}"))?;
    }
    for trial in 0..50 {
        let n = 1 + trial % 2;
        let root = random_torus_point(&mut rng, n);
        let degs: Vec<i64> = (0..=n).map(|_| rng.gen_range(1..=2)).collect();
        let fs: Vec<SparsePoly> = degs
            .iter()
            .map(|&d| planted_poly(&mut rng, n, &dense_support(n, d), &root, 9))
            .collect();
        let m = macaulay_matrix_dense(&fs, &degs).map_err(|e| e.to_string())?;
        let det = m.determinant().map_err(|e| e.to_string())?;
        check(det.is_zero(), || format!("Macaulay trial {trial}: det {det}"))?;
    }
    Ok("50 Canny-Emiris and 50 dense Macaulay determinants vanish".into())
}

fn koszul_golden() -> Outcome {
    // The 6x6 table, transcribed: rows y_i e_j, columns x_i e_j; a, b, c are the
    // coefficient grids of f0, f1, f2 with a_{ij} the coefficient of x_i y_j.
    const ROWS: [&str; 6] = ["y0e0", "y1e0", "y1e1", "y1e2", "y0e1", "y0e2"];
    const COLS: [&str; 6] = ["x0e0", "x1e0", "x1e2", "x1e1", "x0e2", "x0e1"];
    const TABLE: [[&str; 6]; 6] = [
        ["0", "0", "b10", "-c10", "b00", "-c00"],
        ["0", "0", "b11", "-c11", "b01", "-c01"],
        ["-c01", "-c11", "a11", "0", "a01", "0"],
        ["-b01", "-b11", "0", "a11", "0", "a01"],
        ["-c00", "-c10", "a10", "0", "a00", "0"],
        ["-b00", "-b10", "0", "a10", "0", "a00"],
    ];
    check(KOSZUL_ROWS == ROWS && KOSZUL_COLUMNS == COLS && KOSZUL_PATTERN == TABLE, || {
        "symbolic layout differs".into()
    })?;
    // Distinct primes as coefficients make every symbol identifiable.
    let primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    let form = |k: usize| {
        let mut f = SparsePoly::zero(4);
        for i in 0..2 {
            for j in 0..2 {
                let mut e = vec![0; 4];
                e[i] = 1;
                e[2 + j] = 1;
                f.add_term(Exponent(e), int(primes[4 * k + 2 * i + j]));
            }
        }
        f
    };
    let k = koszul_bilinear_matrix(&form(0), &form(1), &form(2)).map_err(|e| e.to_string())?;
    for (r, row) in TABLE.iter().enumerate() {
        for (c, sym) in row.iter().enumerate() {
            let want = if *sym == "0" {
                Rat::zero()
            } else {
                let (neg, s) = sym.strip_prefix('-').map_or((false, *sym), |s| (true, s));
                let b = s.as_bytes();
                let poly = (b[0] - b'a') as usize;
                let (i, j) = ((b[1] - b'0') as usize, (b[2] - b'0') as usize);
                let v = int(primes[4 * poly + 2 * i + j]);
                if neg {
                    -v
                } else {
                    v
                }
            };
            check(*k.matrix.get(r, c) == want, || format!("entry ({r}, {c}) = {}", k.matrix.get(r, c)))?;
        }
    }
    // Planted roots (X, Y) = (1, 1) and (2, 3) in the chart x0 = y0 = 1.
    let sys = PolySystem::parse(
        &["4*x0*y0 - 5*x1*y0 + x1*y1", "x0*y0 - 2*x1*y0 + x0*y1"],
        ["x0", "x1", "y0", "y1"].iter().map(|s| s.to_string()).collect(),
    )
    .unwrap();
    let b = solve_bilinear_koszul(&sys.polys()[0], &sys.polys()[1], 1e-8).map_err(|e| e.to_string())?;
    let mut got: Vec<(f64, f64)> = b.solutions.points.iter().map(|p| (p[1].re, p[3].re)).collect();
    got.sort_by(|a, b| a.0.total_cmp(&b.0));
    let expected = [(1.0, 1.0), (2.0, 3.0)];
    check(got.len() == 2, || format!("{got:?}"))?;
    for ((x, y), (ex, ey)) in got.iter().zip(expected) {
        check((x - ex).abs() < 1e-8 && (y - ey).abs() < 1e-8, || format!("{got:?}"))?;
    }
    let worst = b.solutions.residuals.iter().copied().fold(0.0, f64::max);
    check(worst < 1e-8, || format!("residual {worst:e}"))?;
    Ok(format!("36 entries match, planted roots recovered, residual {worst:.1e}"))
}

fn dense_system(rng: &mut rand_chacha::ChaCha8Rng, max_bezout: i64) -> PolySystem {
    loop {
        let n = rng.gen_range(1..=3);
        let degs: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
        if degs.iter().product::<i64>() > max_bezout {
            continue;
        }
        return system(degs.iter().map(|&d| random_dense(rng, n, d, 9)).collect());
    }
}

fn f5_optimality() -> Outcome {
    let mut rng = rng(6060);
    let (mut skipped, mut audited, mut rows) = (0, 0, 0);
    for trial in 0..20 {
        let sys = dense_system(&mut rng, 27);
        let h = dense_setup(&sys).map_err(|e| e.to_string())?;
        let opts = F5Options {
            criterion: true,
            audit: 100usize.saturating_sub(audited),
        };
        let gb = truncated_gb(&h, MonomialOrder::GRevLex, None, opts).map_err(|e| e.to_string())?;
        check(gb.zero_reductions() == 0, || format!("trial {trial}: {}", gb.stats_json()))?;
        let bad: usize = gb.stats.iter().map(|s| s.audit_nonzero).sum();
        check(bad == 0, || format!("trial {trial}: {bad} audited rows did not vanish"))?;
        audited += gb.stats.iter().map(|s| s.audited).sum::<usize>();
        skipped += gb.skipped();
        rows += gb.stats.iter().map(|s| s.rows).sum::<usize>();
    }
    check(audited == 100, || format!("only {audited} skipped rows available to audit"))?;
    Ok(format!("0 zero reductions over {rows} rows, {skipped} skipped, {audited} audited rows vanish"))
}

fn minimal(lms: &[Exponent]) -> BTreeSet<Exponent> {
    let divides = |a: &Exponent, b: &Exponent| a.0.iter().zip(&b.0).all(|(x, y)| x <= y);
    lms.iter()
        .filter(|a| !lms.iter().any(|b| b != *a && divides(b, a)))
        .cloned()
        .collect()
}

fn oracle_gb() -> Outcome {
    let mut rng = rng(7070);
    let mut generators = 0;
    for trial in 0..20 {
        let sys = dense_system(&mut rng, 12);
        let h = dense_setup(&sys).map_err(|e| e.to_string())?;
        let gb = truncated_gb(&h, MonomialOrder::GRevLex, None, F5Options::default()).map_err(|e| e.to_string())?;
        let ours: Vec<Exponent> = gb.elements.iter().map(|g| g.leading.clone()).collect();
        let oracle = leading_monomials(&groebner_basis(sys.polys()));
        let (a, b) = (minimal(&ours), minimal(&oracle));
        check(a == b, || format!("trial {trial}: {a:?} vs {b:?}"))?;
        generators += a.len();
    }
    Ok(format!("20 staircases match ({generators} minimal generators)"))
}

fn cross_module() -> Outcome {
    let mut rng = rng(8080);
    let mut done = 0;
    let mut worst: f64 = 0.0;
    while done < 10 {
        let fs: Vec<SparsePoly> = (0..2)
            .map(|_| {
                let size = rng.gen_range(3..=4);
                let s = random_support(&mut rng, 2, 2, size);
                random_poly(&mut rng, 2, &s, 20)
            })
            .collect();
        let m = mv(&fs);
        if m == 0 || m > 6 {
            continue;
        }
        let sys = system(fs);
        let d = solve_torus_detailed(&sys, &SolveOptions::default()).map_err(|e| e.to_string())?;
        let h = default_setup(&sys).map_err(|e| e.to_string())?;
        let t = multiplication_maps(&h, MonomialOrder::GRevLex, Some(&d.f0)).map_err(|e| e.to_string())?;
        let mf0 = t.m_f0.expect("requested");
        let ours = eigen_decomposition(&CMatrix::from_real(&mf0.to_f64()).unwrap()).map_err(|e| e.to_string())?;
        check(same_values(&ours.values, &d.eigen.values, 1e-6), || {
            format!("system {done}: {:?} vs {:?}", ours.values, d.eigen.values)
        })?;
        worst = worst.max(matching_gap(&ours.values, &d.eigen.values).unwrap_or(f64::INFINITY));

        let lex = fglm_lex(&saturate(&t.quotient).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let elim = &lex[0];
        check(elim.terms().all(|(e, _)| e.0[1] == 0), || format!("no eliminant: {elim:?}"))?;
        let deg = elim.terms().map(|(e, _)| e.0[0]).max().unwrap_or(0) as usize;
        let mut coeffs = vec![Complex64::zero(); deg + 1];
        for (e, c) in elim.terms() {
            coeffs[e.0[0] as usize] = Complex64::new(rat_to_f64(c), 0.0);
        }
        let roots = polynomial_roots(&coeffs).map_err(|e| e.to_string())?;
        let xs: Vec<Complex64> = d.solutions.points.iter().map(|p| p[0]).collect();
        check(same_values(&roots, &xs, 1e-6), || format!("system {done}: {roots:?} vs {xs:?}"))?;
        done += 1;
    }
    Ok(format!("10 systems, M_f0 spectra agree (worst {worst:.1e}), eliminant roots match"))
}

fn determinism() -> Outcome {
    let cases: Vec<Vec<String>> = vec![
        vec!["mv".into(), data("pencil.json"), "--verbose".into()],
        vec!["bkk".into(), data("mixed2.json")],
        vec!["macaulay".into(), data("ce3.json"), "--verbose".into()],
        vec!["ce-matrix".into(), data("ce3.json"), "--verbose".into()],
        vec!["koszul".into(), data("koszul3.json")],
        vec!["koszul".into(), data("bilinear.json")],
        vec!["solve".into(), data("pencil.json"), "--seed".into(), "7".into()],
        vec!["solve".into(), data("linear3.json"), "--seed".into(), "11".into()],
        vec!["gb".into(), data("pencil.json"), "--stats".into()],
        vec!["gb".into(), data("sat.json"), "--order".into(), "lex".into()],
    ];
    for args in &cases {
        for format in ["json", "text"] {
            let mut a: Vec<&str> = args.iter().map(String::as_str).collect();
            a.extend(["--format", format]);
            let (x, y) = (cli(&a), cli(&a));
            check(x.status.success(), || format!("{a:?} failed: {}", String::from_utf8_lossy(&x.stderr)))?;
            check(x.stdout == y.stdout && x.status.code() == y.status.code(), || format!("{a:?} differs"))?;
        }
    }
    Ok(format!("{} invocations repeated byte-identically", cases.len() * 2))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("BKK pencil", bkk_pencil),
        ("mixed-volume cross-validation", mixed_volume_cross_validation),
        ("Bezout degeneration", bezout_degeneration),
        ("planted-root vanishing", planted_root_vanishing),
        ("Koszul golden", koszul_golden),
        ("F5 optimality", f5_optimality),
        ("oracle GB equivalence", oracle_gb),
        ("cross-module consistency", cross_module),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail} [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
