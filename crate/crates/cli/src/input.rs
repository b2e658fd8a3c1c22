use std::fs;
use std::io::Read;

use serde::Deserialize;
use toric_core::polytope::LatticePolytope;
use toric_core::{Exponent, PolySystem};

use crate::commands::CmdError;

/// Reads a system from a path (`-` for stdin) or, with `inline`, from the
/// argument itself with `;` separating lines.
pub fn load_system(arg: &str, inline: bool) -> Result<PolySystem, CmdError> {
    let text = if inline {
        arg.replace(';', "\n")
    } else if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(CmdError::io)?;
        s
    } else {
        fs::read_to_string(arg).map_err(|e| CmdError::io(format!("{arg}: {e}")))?
    };
    let sys = if text.trim_start().starts_with('{') {
        PolySystem::from_json(&text)
    } else {
        PolySystem::from_text(&text)
    };
    sys.map_err(CmdError::from)
}

#[derive(Deserialize)]
struct SummandsFile {
    summands: Vec<Vec<Vec<i64>>>,
    degrees: Vec<Vec<u32>>,
}

pub fn load_summands(path: &str, nvars: usize) -> Result<(Vec<LatticePolytope>, Vec<Vec<u32>>), CmdError> {
    let text = fs::read_to_string(path).map_err(|e| CmdError::io(format!("{path}: {e}")))?;
    let raw: SummandsFile = serde_json::from_str(&text).map_err(|e| CmdError::parse(format!("{path}: {e}")))?;
    let polys = raw
        .summands
        .into_iter()
        .map(|vs| LatticePolytope::from_points(nvars, vs.into_iter().map(Exponent)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((polys, raw.degrees))
}
