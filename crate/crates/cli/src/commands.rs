use std::fmt::Write as _;
use std::fs;

use num_complex::Complex64;
use serde_json::{json, Value};
use toric_core::linalg::{eigen_decomposition, CMatrix};
use toric_core::polytope::{mixed_cells, mixed_subdivision_with_retry, mixed_volume_report, newton_polytope};
use toric_core::resultant::{canny_emiris_with_retry, koszul_bilinear_matrix, macaulay_matrix_dense};
use toric_core::solver::{solve_bilinear_koszul, solve_torus_detailed, SolutionSet, SolveOptions};
use toric_core::toric::{
    build_algebra, default_setup, fglm_lex, homogenize_system, macaulay_matrix_graded, multiplication_maps, saturate,
    truncated_gb, F5Options, HomogenizedSystem, MonomialOrder,
};
use toric_core::{Error, Exponent, PolySystem};

use crate::input::{load_summands, load_system};
use crate::Common;

pub const EXIT_OTHER: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_DIMENSION: u8 = 3;
pub const EXIT_SINGULAR: u8 = 4;
pub const EXIT_RESIDUAL: u8 = 5;
pub const EXIT_UNSTABLE: u8 = 6;

#[derive(Debug)]
pub struct CmdError {
    pub code: u8,
    pub message: String,
}

impl CmdError {
    pub fn io(e: impl std::fmt::Display) -> Self {
        CmdError {
            code: EXIT_OTHER,
            message: e.to_string(),
        }
    }

    pub fn parse(e: impl std::fmt::Display) -> Self {
        CmdError {
            code: EXIT_PARSE,
            message: e.to_string(),
        }
    }

    fn dimension(msg: impl Into<String>) -> Self {
        CmdError {
            code: EXIT_DIMENSION,
            message: msg.into(),
        }
    }
}

impl From<Error> for CmdError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Syntax { .. } | Error::UnknownVariable(_) => EXIT_PARSE,
            Error::DimensionMismatch(_) | Error::NotSquare { .. } => EXIT_DIMENSION,
            Error::SingularM11 => EXIT_SINGULAR,
            Error::DimensionUnstable(_) => EXIT_UNSTABLE,
            _ => EXIT_OTHER,
        };
        CmdError {
            code,
            message: e.to_string(),
        }
    }
}

pub struct Output {
    pub json: Value,
    pub text: String,
    pub code: u8,
    pub warnings: Vec<String>,
}

impl Output {
    fn ok(json: Value, text: String) -> Self {
        Output {
            json,
            text,
            code: 0,
            warnings: Vec::new(),
        }
    }
}

fn dump(c: &Common, value: &Value) -> Result<(), CmdError> {
    if let Some(path) = &c.matrix_dump {
        let s = serde_json::to_string_pretty(value).expect("json");
        fs::write(path, s + "\n").map_err(|e| CmdError::io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn complex(z: &Complex64) -> Value {
    json!({"re": z.re, "im": z.im})
}

/// Twelve decimals, trailing zeros dropped.
fn fmt_real(x: f64) -> String {
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn fmt_complex(z: &Complex64) -> String {
    let im = fmt_real(z.im);
    if im == "0" {
        fmt_real(z.re)
    } else if im.starts_with('-') {
        format!("{}{im}i", fmt_real(z.re))
    } else {
        format!("{}+{im}i", fmt_real(z.re))
    }
}

/// `n + 1` polynomials in `n` variables.
fn overdetermined(sys: &PolySystem) -> Result<(), CmdError> {
    if sys.len() != sys.nvars() + 1 {
        return Err(CmdError::dimension(format!(
            "need n + 1 polynomials in n variables, got {} in {}",
            sys.len(),
            sys.nvars()
        )));
    }
    Ok(())
}

fn square(sys: &PolySystem) -> Result<(), CmdError> {
    if !sys.is_square() {
        return Err(CmdError::dimension(format!(
            "need a square system, got {} polynomials in {} variables",
            sys.len(),
            sys.nvars()
        )));
    }
    Ok(())
}

pub fn mixed_volume(c: &Common, input: &str) -> Result<Output, CmdError> {
    let sys = load_system(input, c.inline)?;
    square(&sys)?;
    let ps = sys.polys().iter().map(newton_polytope).collect::<Result<Vec<_>, _>>()?;
    let report = mixed_volume_report(&ps)?;
    let mut json = json!({"mv": report.mixed_volume});
    let mut text = format!("mv = {}\n", report.mixed_volume);
    if c.verbose {
        let supports: Vec<Vec<Exponent>> = sys.polys().iter().map(|f| f.support().into_iter().collect()).collect();
        let sub = mixed_subdivision_with_retry(&supports, c.seed)?;
        let cells = mixed_cells(&sub)?;
        json["counts"] = serde_json::to_value(&report.counts).expect("json");
        json["polytopes"] = ps.iter().map(|p| p.to_json()).collect();
        json["mixed_cells"] = serde_json::to_value(&cells).expect("json");
        json["seed"] = json!(c.seed);
        for s in &report.counts {
            let _ = writeln!(text, "  #lattice points of sum {:?}: {}", s.subset, s.lattice_points);
        }
        let _ = writeln!(text, "  mixed cells: {}, total volume {}", cells.cells.len(), cells.total);
    }
    Ok(Output::ok(json, text))
}

pub fn macaulay(c: &Common, input: &str, degrees: Option<Vec<i64>>) -> Result<Output, CmdError> {
    let sys = load_system(input, c.inline)?;
    overdetermined(&sys)?;
    let degrees = match degrees {
        Some(d) => d,
        None => sys
            .polys()
            .iter()
            .map(|f| f.total_degree().ok_or(Error::ZeroPolynomial))
            .collect::<Result<Vec<_>, _>>()?,
    };
    let m = macaulay_matrix_dense(sys.polys(), &degrees)?;
    let mut json = json!({"degrees": degrees, "matrix": m.to_json()});
    dump(c, &json["matrix"])?;
    let mut text = format!("{}x{} dense Macaulay matrix, degrees {:?}\n", m.nrows(), m.ncols(), degrees);
    if c.verbose {
        text.push_str(&m.to_grid());
        text.push('\n');
    }
    if m.is_square() {
        let det = m.determinant()?;
        let _ = writeln!(text, "det = {}", toric_core::poly::format_rational(&det));
        json["determinant"] = json!(toric_core::poly::format_rational(&det));
    }
    Ok(Output::ok(json, text))
}

pub fn ce_matrix(c: &Common, input: &str) -> Result<Output, CmdError> {
    let sys = load_system(input, c.inline)?;
    overdetermined(&sys)?;
    let d = canny_emiris_with_retry(sys.polys(), c.seed)?;
    let m = &d.matrix;
    let det = m.determinant()?;
    let delta: Vec<String> = d.delta.iter().map(toric_core::poly::format_rational).collect();
    let mut json = json!({
        "seed": c.seed,
        "delta": delta,
        "rows_per_poly": d.b_sets.iter().map(Vec::len).collect::<Vec<_>>(),
        "matrix": m.to_json(),
        "determinant": toric_core::poly::format_rational(&det),
    });
    if c.verbose {
        json["subdivision"] = d.subdivision.to_json();
    }
    dump(c, &json["matrix"])?;
    let mut text = format!(
        "{}x{} Canny-Emiris matrix, delta = ({})\n",
        m.nrows(),
        m.ncols(),
        delta.join(", ")
    );
    if c.verbose {
        text.push_str(&m.to_grid());
        text.push('\n');
    }
    let _ = writeln!(text, "det = {}", toric_core::poly::format_rational(&det));
    Ok(Output::ok(json, text))
}

fn solutions_json(s: &SolutionSet) -> Value {
    json!({
        "points": s.points.iter().map(|p| p.iter().map(complex).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "residuals": s.residuals,
        "multiplicities": s.multiplicities,
        "mv": s.mv,
        "seed": s.seed,
        "rejected": serde_json::to_value(&s.rejected).expect("json"),
    })
}

fn solutions_text(s: &SolutionSet, vars: &[String]) -> String {
    let mut text = format!("{} points (mv = {}, seed = {})\n", s.points.len(), s.mv, s.seed);
    for ((p, r), m) in s.points.iter().zip(&s.residuals).zip(&s.multiplicities) {
        let coords: Vec<String> = vars.iter().zip(p).map(|(v, z)| format!("{v} = {}", fmt_complex(z))).collect();
        let _ = write!(text, "  {}  residual {r:.3e}", coords.join(", "));
        if *m > 1 {
            let _ = write!(text, "  multiplicity {m}");
        }
        text.push('\n');
    }
    for r in &s.rejected {
        let coords: Vec<String> = vars.iter().zip(&r.point).map(|(v, z)| format!("{v} = {}", fmt_complex(z))).collect();
        let _ = writeln!(text, "  rejected: {}  residual {:.3e}", coords.join(", "), r.residual);
    }
    text
}

fn finish_solutions(json: Value, text: String, s: &SolutionSet, tol: f64) -> Output {
    let mut warnings = s.warnings.clone();
    if !s.rejected.is_empty() {
        warnings.push(format!("{} candidate points exceed the residual tolerance {tol:e}", s.rejected.len()));
    }
    let code = if s.all_within(tol) { 0 } else { EXIT_RESIDUAL };
    Output {
        json,
        text,
        code,
        warnings,
    }
}

pub fn koszul(c: &Common, input: &str) -> Result<Output, CmdError> {
    let sys = load_system(input, c.inline)?;
    if sys.nvars() != 4 {
        return Err(CmdError::dimension("bilinear forms need the variables x0, x1, y0, y1"));
    }
    match sys.len() {
        3 => {
            let fs = sys.polys();
            let k = koszul_bilinear_matrix(&fs[0], &fs[1], &fs[2])?;
            let det = k.determinant();
            let mut json = json!({"matrix": k.to_json()});
            json["determinant"] = json!(toric_core::poly::format_rational(&det));
            dump(c, &json["matrix"])?;
            let mut text = String::from("Koszul matrix\n");
            for i in 0..6 {
                let row: Vec<String> = k.matrix.row(i).iter().map(toric_core::poly::format_rational).collect();
                let _ = writeln!(text, "  {:>5}: {}", k.row_labels()[i], row.join(" "));
            }
            let _ = writeln!(text, "det = {}", toric_core::poly::format_rational(&det));
            Ok(Output::ok(json, text))
        }
        2 => {
            let fs = sys.polys();
            let b = solve_bilinear_koszul(&fs[0], &fs[1], c.tol)?;
            let mut json = solutions_json(&b.solutions);
            json["matrix"] = b.koszul.to_json();
            dump(c, &json["matrix"])?;
            let text = solutions_text(&b.solutions, sys.vars());
            Ok(finish_solutions(json, text, &b.solutions, c.tol))
        }
        k => Err(CmdError::dimension(format!("expected 2 or 3 bilinear forms, got {k}"))),
    }
}

pub fn solve(c: &Common, input: &str) -> Result<Output, CmdError> {
    let sys = load_system(input, c.inline)?;
    square(&sys)?;
    let opts = SolveOptions {
        seed: c.seed,
        tol: c.tol,
        polish: true,
    };
    let d = solve_torus_detailed(&sys, &opts)?;
    dump(c, &json!({"canny_emiris": d.canny_emiris.matrix.to_json(), "attempt": d.attempt}))?;
    let mut json = solutions_json(&d.solutions);
    let mut text = solutions_text(&d.solutions, sys.vars());
    if c.verbose {
        json["f0"] = json!(d.f0.to_text(sys.vars()));
        json["attempt"] = json!(d.attempt);
        json["matrix_size"] = json!(d.canny_emiris.matrix.nrows());
        let _ = writeln!(
            text,
            "  f0 = {}, Canny-Emiris matrix {}x{}, attempt {}",
            d.f0.to_text(sys.vars()),
            d.canny_emiris.matrix.nrows(),
            d.canny_emiris.matrix.ncols(),
            d.attempt
        );
    }
    Ok(finish_solutions(json, text, &d.solutions, c.tol))
}

fn setup(sys: &PolySystem, summands: &str) -> Result<HomogenizedSystem, CmdError> {
    if summands == "auto" {
        return Ok(default_setup(sys)?);
    }
    let (ps, degrees) = load_summands(summands, sys.nvars())?;
    let alg = build_algebra(ps)?;
    Ok(homogenize_system(sys, &alg, &degrees)?)
}

fn sorted_eigenvalues(m: &toric_core::linalg::RatMatrix) -> Result<Vec<Complex64>, CmdError> {
    let mut vals = eigen_decomposition(&CMatrix::from_real(&m.to_f64())?)?.values;
    vals.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(vals)
}

pub fn gb(
    c: &Common,
    input: &str,
    summands: &str,
    bstop: Option<Vec<u32>>,
    order: MonomialOrder,
    stats: bool,
) -> Result<Output, CmdError> {
    let sys = load_system(input, c.inline)?;
    let vars = sys.vars().to_vec();
    let h = setup(&sys, summands)?;
    let gb = truncated_gb(&h, order, bstop.as_deref(), F5Options::default())?;
    dump(c, &macaulay_matrix_graded(&h, &gb.b_stop, order)?.to_json())?;
    let maps = multiplication_maps(&h, order, None)?;
    let sat = saturate(&maps.quotient)?;
    let lex = fglm_lex(&sat)?;

    let mut eigen = serde_json::Map::new();
    let mut eigen_text = String::new();
    if sat.dim() > 0 {
        for (v, m) in vars.iter().zip(&sat.maps) {
            let vals = sorted_eigenvalues(m)?;
            let _ = writeln!(
                eigen_text,
                "  {v}: {}",
                vals.iter().map(fmt_complex).collect::<Vec<_>>().join(", ")
            );
            eigen.insert(v.clone(), vals.iter().map(complex).collect());
        }
    }
    let exps = |es: &[Exponent]| es.iter().map(|e| e.0.clone()).collect::<Vec<_>>();
    let mut json = json!({
        "order": order.to_string(),
        "b_stop": gb.b_stop,
        "shifts": exps(&h.shifts),
        "gb": gb.elements.iter().map(|g| json!({
            "degree": g.degree,
            "leading": g.leading.0,
            "poly": g.poly.to_text(&vars),
        })).collect::<Vec<_>>(),
        "b": maps.b,
        "d0": maps.d0,
        "augmented": maps.augmented,
        "basis": exps(&maps.basis),
        "quotient_dim": maps.basis.len(),
        "torus_dim": sat.dim(),
        "eigenvalues": eigen,
        "lex": lex.iter().map(|g| g.to_text(&vars)).collect::<Vec<_>>(),
    });
    if stats {
        json["stats"] = gb.stats_json();
    }

    let mut text = format!("truncated Groebner basis ({order}, b_stop = {:?})\n", gb.b_stop);
    for g in &gb.elements {
        let _ = writeln!(text, "  [{:?}] {}", g.degree, g.poly.to_text(&vars));
    }
    let _ = writeln!(
        text,
        "quotient dimension {} at b = {:?} (d0 = {:?}), {} on the torus",
        maps.basis.len(),
        maps.b,
        maps.d0,
        sat.dim()
    );
    text.push_str(&eigen_text);
    text.push_str("lex basis\n");
    for g in &lex {
        let _ = writeln!(text, "  {}", g.to_text(&vars));
    }
    if stats {
        for s in &gb.stats {
            let _ = writeln!(
                text,
                "  degree {:?}: {}x{}, skipped {}, zero reductions {}, rank {}",
                s.degree, s.rows, s.cols, s.skipped, s.zero_reductions, s.rank
            );
        }
    }
    Ok(Output::ok(json, text))
}
