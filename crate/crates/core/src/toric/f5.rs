//! Graded Macaulay matrices, the F5 row criterion and truncated bases.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Echelon, Insert, SparseRow};
use crate::poly::{format_rational, Exponent, SparsePoly};

use super::algebra::PieceCache;
use super::homogenize::HomogenizedSystem;
use super::order::{degree_sub, degrees_below, Degree, MonomialOrder};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct F5Options {
    /// Skip rows predicted to reduce to zero.
    pub criterion: bool,
    /// Number of skipped rows to force back in and check for zero (0 = none).
    pub audit: usize,
}

impl Default for F5Options {
    fn default() -> Self {
        F5Options { criterion: true, audit: 0 }
    }
}

/// Row `x^shift * f_poly`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedRow {
    pub poly: usize,
    pub shift: Exponent,
}

/// Macaulay matrix of one degree. Columns decrease in the monomial order;
/// rows are grouped by polynomial with increasing shifts inside a group.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedMacaulay {
    pub degree: Degree,
    pub cols: Vec<Exponent>,
    pub rows: Vec<GradedRow>,
    pub entries: Vec<SparseRow>,
    pub skipped: Vec<GradedRow>,
}

impl GradedMacaulay {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "degree": self.degree,
            "cols": self.cols.iter().map(|c| c.0.clone()).collect::<Vec<_>>(),
            "rows": self.rows,
            "entries": self.entries.iter().map(|r| r.iter().map(|(j, v)| (j, format_rational(v))).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "skipped": self.skipped,
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DegreeStats {
    pub degree: Degree,
    pub rows: usize,
    pub cols: usize,
    pub skipped: usize,
    pub zero_reductions: usize,
    pub rank: usize,
    pub new_elements: usize,
    pub audited: usize,
    /// Audited skipped rows that did not reduce to zero; always 0 if the criterion is sound.
    pub audit_nonzero: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GbElement {
    pub degree: Degree,
    /// Exponent of the leading monomial `(leading, degree)`.
    pub leading: Exponent,
    /// Terms `c x^alpha` of the element, all of degree `degree`.
    pub poly: SparsePoly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedGB {
    pub elements: Vec<GbElement>,
    /// Leading monomials of the ideal in each processed degree.
    pub lm_table: BTreeMap<Degree, Vec<Exponent>>,
    pub b_stop: Degree,
    pub order: MonomialOrder,
    pub stats: Vec<DegreeStats>,
}

impl TruncatedGB {
    pub fn zero_reductions(&self) -> usize {
        self.stats.iter().map(|s| s.zero_reductions).sum()
    }

    pub fn skipped(&self) -> usize {
        self.stats.iter().map(|s| s.skipped).sum()
    }

    pub fn stats_json(&self) -> serde_json::Value {
        serde_json::to_value(&self.stats).expect("serializable")
    }

    pub fn to_json(&self, vars: &[String]) -> serde_json::Value {
        serde_json::json!({
            "order": self.order.to_string(),
            "b_stop": self.b_stop,
            "elements": self.elements.iter().map(|g| serde_json::json!({
                "degree": g.degree,
                "leading": g.leading.0,
                "poly": g.poly.to_text(vars),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Echelon data of one processed degree.
#[derive(Debug, Clone)]
pub(crate) struct DegreeData {
    pub cols: Vec<Exponent>,
    pub col_index: HashMap<Exponent, usize>,
    /// Reduced row echelon form of the whole matrix.
    pub echelon: Echelon,
    /// `prefix_lms[i]`: leading monomials of `<f_1, .., f_i>` in this degree.
    pub prefix_lms: Vec<HashSet<Exponent>>,
    pub stats: DegreeStats,
}

pub(crate) struct Eliminator<'a> {
    h: &'a HomogenizedSystem,
    order: MonomialOrder,
    opts: F5Options,
    audit_left: usize,
    pub cache: PieceCache<'a>,
    pub done: BTreeMap<Degree, DegreeData>,
}

struct PlannedRow {
    label: GradedRow,
    entries: SparseRow,
    skipped: bool,
}

impl<'a> Eliminator<'a> {
    pub fn new(h: &'a HomogenizedSystem, order: MonomialOrder, opts: F5Options) -> Self {
        Eliminator {
            h,
            order,
            opts,
            audit_left: opts.audit,
            cache: PieceCache::new(&h.algebra),
            done: BTreeMap::new(),
        }
    }

    /// Degree-`b` monomials in decreasing order.
    pub fn sorted_columns(&mut self, b: &[u32]) -> Result<Vec<Exponent>> {
        let mut cols = self.cache.monomials(b)?.to_vec();
        let order = self.order;
        cols.sort_by(|x, y| order.cmp(y, x));
        Ok(cols)
    }

    fn plan(&mut self, b: &[u32], cols: &[Exponent]) -> Result<Vec<PlannedRow>> {
        let index: HashMap<&Exponent, usize> = cols.iter().enumerate().map(|(j, c)| (c, j)).collect();
        let mut out = Vec::new();
        let order = self.order;
        for (i, p) in self.h.polys.iter().enumerate() {
            let Some(c) = degree_sub(b, &p.degree) else {
                continue;
            };
            let mut shifts = self.cache.monomials(&c)?.to_vec();
            shifts.sort_by(|x, y| order.cmp(x, y));
            let table = if self.opts.criterion && i > 0 {
                self.done.get(&c).map(|d| &d.prefix_lms[i])
            } else {
                None
            };
            for beta in shifts {
                let mut entries: SparseRow = p
                    .poly
                    .terms()
                    .map(|(a, v)| {
                        let m = a + &beta;
                        index
                            .get(&m)
                            .map(|&j| (j, v.clone()))
                            .ok_or_else(|| Error::InvalidInput(format!("monomial {:?} missing from degree {b:?}", m.0)))
                    })
                    .collect::<Result<_>>()?;
                entries.sort_by_key(|(j, _)| *j);
                let skipped = table.is_some_and(|t| t.contains(&beta));
                out.push(PlannedRow {
                    label: GradedRow { poly: i, shift: beta },
                    entries,
                    skipped,
                });
            }
        }
        Ok(out)
    }

    /// The matrix of degree `b` using the leading monomial tables processed so far.
    pub fn matrix(&mut self, b: &[u32]) -> Result<GradedMacaulay> {
        let cols = self.sorted_columns(b)?;
        let plan = self.plan(b, &cols)?;
        let mut m = GradedMacaulay {
            degree: b.to_vec(),
            cols,
            rows: Vec::new(),
            entries: Vec::new(),
            skipped: Vec::new(),
        };
        for r in plan {
            if r.skipped {
                m.skipped.push(r.label);
            } else {
                m.rows.push(r.label);
                m.entries.push(r.entries);
            }
        }
        Ok(m)
    }

    /// Eliminates the degree-`b` matrix with columns in the given order
    /// (decreasing monomial order if `None`).
    pub fn eliminate(&mut self, b: &[u32], cols: Option<Vec<Exponent>>) -> Result<DegreeData> {
        let cols = match cols {
            Some(c) => c,
            None => self.sorted_columns(b)?,
        };
        let plan = self.plan(b, &cols)?;
        let m = self.h.polys.len();
        let mut stats = DegreeStats {
            degree: b.to_vec(),
            cols: cols.len(),
            ..Default::default()
        };
        let mut echelon = Echelon::new();
        let mut prefix_lms = vec![HashSet::new()];
        let snapshot = |e: &Echelon| e.pivot_columns().map(|j| cols[j].clone()).collect::<HashSet<_>>();
        let mut current = 0;
        for r in plan {
            while current < r.label.poly {
                prefix_lms.push(snapshot(&echelon));
                current += 1;
            }
            if r.skipped {
                stats.skipped += 1;
                if self.audit_left > 0 {
                    self.audit_left -= 1;
                    stats.audited += 1;
                    if !echelon.reduce(r.entries, false).is_empty() {
                        stats.audit_nonzero += 1;
                    }
                }
                continue;
            }
            stats.rows += 1;
            if echelon.insert(r.entries) == Insert::Zero {
                stats.zero_reductions += 1;
            }
        }
        while prefix_lms.len() <= m {
            prefix_lms.push(snapshot(&echelon));
        }
        echelon.interreduce();
        stats.rank = echelon.rank();
        let col_index = cols.iter().enumerate().map(|(j, c)| (c.clone(), j)).collect();
        Ok(DegreeData {
            cols,
            col_index,
            echelon,
            prefix_lms,
            stats,
        })
    }

    pub fn process(&mut self, b: &[u32]) -> Result<&DegreeData> {
        if !self.done.contains_key(b) {
            let data = self.eliminate(b, None)?;
            self.done.insert(b.to_vec(), data);
        }
        Ok(&self.done[b])
    }
}

fn check_degree(h: &HomogenizedSystem, b: &[u32]) -> Result<()> {
    if b.len() != h.algebra.rank() {
        return Err(Error::DimensionMismatch(format!(
            "degree of length {} for an algebra of rank {}",
            b.len(),
            h.algebra.rank()
        )));
    }
    Ok(())
}

/// Matrix at degree `b` after processing every smaller degree for the F5 tables.
pub fn macaulay_matrix_graded(h: &HomogenizedSystem, b: &[u32], order: MonomialOrder) -> Result<GradedMacaulay> {
    check_degree(h, b)?;
    let mut el = Eliminator::new(h, order, F5Options::default());
    for c in degrees_below(b) {
        if c != b {
            el.process(&c)?;
        }
    }
    el.matrix(b)
}

/// Processes every degree `b <= b_stop` in increasing graded order. A pivot
/// row whose leading monomial is not divisible by an earlier element's
/// leading monomial becomes a new element.
pub fn truncated_gb(
    h: &HomogenizedSystem,
    order: MonomialOrder,
    b_stop: Option<&[u32]>,
    opts: F5Options,
) -> Result<TruncatedGB> {
    let b_stop = b_stop.map_or_else(|| h.total_degree(), <[u32]>::to_vec);
    check_degree(h, &b_stop)?;
    let n = h.nvars();
    let mut el = Eliminator::new(h, order, opts);
    let mut elements: Vec<GbElement> = Vec::new();
    let mut lm_table = BTreeMap::new();
    let mut stats = Vec::new();
    for b in degrees_below(&b_stop) {
        el.process(&b)?;
        let data = &el.done[&b];
        let pivots: Vec<(Exponent, SparsePoly)> = data
            .echelon
            .pivot_rows()
            .map(|(j, row)| {
                let poly = SparsePoly::from_terms(n, row.iter().map(|(k, v)| (data.cols[*k].clone(), v.clone())))
                    .expect("consistent arity");
                (data.cols[j].clone(), poly)
            })
            .collect();
        let mut st = data.stats.clone();
        lm_table.insert(b.clone(), pivots.iter().map(|(e, _)| e.clone()).collect());
        let earlier = elements.len();
        for (lead, poly) in pivots {
            let mut divisible = false;
            for g in &elements[..earlier] {
                if el.cache.divides((&g.leading, &g.degree), (&lead, &b))? {
                    divisible = true;
                    break;
                }
            }
            if !divisible {
                elements.push(GbElement {
                    degree: b.clone(),
                    leading: lead,
                    poly,
                });
            }
        }
        st.new_elements = elements.len() - earlier;
        stats.push(st);
    }
    Ok(TruncatedGB {
        elements,
        lm_table,
        b_stop,
        order,
        stats,
    })
}

/// Drops the grading: `x^(alpha, b) -> x^alpha`.
pub fn dehomogenize_gb(gb: &TruncatedGB) -> Vec<SparsePoly> {
    gb.elements.iter().map(|g| g.poly.clone()).collect()
}
