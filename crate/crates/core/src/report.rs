//! Reports behind the command-line interface.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::closed_form::{closed_form_homology, k_homology, HomologyProfile, KHomology, Method};
use crate::coxeter::{enumerate_spherical, CoxeterMatrix, MatrixFile};
use crate::davis::{build_cells, BredonChainComplex};
use crate::error::{Error, Result};
use crate::homology::FgAbGroup;
use crate::repr::{RepresentationRings, DEFAULT_ORDER_CAP};
use crate::ChainComputation;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

pub const K_THEORY_NOTE: &str =
    "via Baum-Connes (Coxeter groups satisfy the conjecture, Haagerup)";

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Resource(_) => EXIT_RESOURCE,
        Error::InvalidMatrix(_) | Error::Input(_) | Error::Precondition(_) => EXIT_INPUT,
        Error::Consistency(_) => EXIT_VALIDATION,
    }
}

pub fn read_matrix(path: &Path) -> Result<CoxeterMatrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    let file: MatrixFile = serde_json::from_str(&text)
        .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    file.into_matrix()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetEntry {
    pub subset: Vec<usize>,
    #[serde(rename = "type")]
    pub type_label: String,
    pub order: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    /// `s(n)` for `n = 0, 1, ...`
    pub spherical_counts: Vec<usize>,
    pub total_spherical: usize,
    pub finite_group: bool,
    /// Type of the whole system, by components.
    #[serde(rename = "type")]
    pub type_label: String,
    pub order: Option<u128>,
    pub subsets: Vec<SubsetEntry>,
}

pub fn classify_report(w: &CoxeterMatrix) -> Classification {
    let poset = enumerate_spherical(w);
    let whole = crate::coxeter::classify(w, w.all_generators());
    let subsets = poset
        .iter()
        .map(|t| SubsetEntry {
            subset: t.to_vec(),
            type_label: poset.label_of[&t].to_string(),
            order: poset.order_of[&t],
        })
        .collect();
    Classification {
        spherical_counts: poset.counts(),
        total_spherical: poset.total(),
        finite_group: poset.is_finite_group(),
        type_label: whole.to_string(),
        order: whole.order(),
        subsets,
    }
}

pub fn classification_text(c: &Classification) -> String {
    let mut s = String::new();
    match c.order {
        Some(o) => writeln!(s, "finite group of order {o} ({})", c.type_label).unwrap(),
        None => writeln!(s, "infinite Coxeter group").unwrap(),
    }
    writeln!(s, "spherical subsets s(n) = {:?} (total {})", c.spherical_counts, c.total_spherical).unwrap();
    for e in &c.subsets {
        let members: Vec<String> = e.subset.iter().map(ToString::to_string).collect();
        writeln!(s, "  {{{}}}  {}  order {}", members.join(","), e.type_label, e.order).unwrap();
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodChoice {
    Auto,
    Chain,
    Closed,
}

#[derive(Clone, Debug)]
pub struct HomologyOptions {
    pub method: MethodChoice,
    pub max_degree: Option<usize>,
    pub order_cap: u128,
    pub timing: bool,
}

impl Default for HomologyOptions {
    fn default() -> Self {
        Self { method: MethodChoice::Auto, max_degree: None, order_cap: DEFAULT_ORDER_CAP, timing: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub degree: usize,
    pub methods: Vec<String>,
    pub values: Vec<FgAbGroup>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub input: MatrixFile,
    pub classification: Classification,
    pub profiles: Vec<HomologyProfile>,
    pub k_homology: Option<KHomology>,
    pub k_theory_note: String,
    pub discrepancies: Vec<Discrepancy>,
    pub notes: Vec<String>,
    /// Wall-clock milliseconds per method; only filled on request, to keep
    /// the default JSON output reproducible.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing_ms: Option<BTreeMap<String, f64>>,
    /// Resource cap hit during the run.
    #[serde(default)]
    pub partial: bool,
}

impl RunReport {
    pub fn agreed(&self) -> bool {
        self.discrepancies.is_empty()
    }

    pub fn profile(&self, method: Method) -> Option<&HomologyProfile> {
        self.profiles.iter().find(|p| p.method == method)
    }
}

fn compare(profiles: &[HomologyProfile]) -> Vec<Discrepancy> {
    let degrees: std::collections::BTreeSet<usize> =
        profiles.iter().flat_map(|p| p.groups.keys().copied()).collect();
    degrees
        .into_iter()
        .filter_map(|d| {
            let values: Vec<FgAbGroup> = profiles.iter().map(|p| p.get(d)).collect();
            values.windows(2).any(|w| w[0] != w[1]).then(|| Discrepancy {
                degree: d,
                methods: profiles.iter().map(|p| format!("{} ({})", p.method, p.detail)).collect(),
                values,
            })
        })
        .collect()
}

/// Runs the requested methods and cross-checks them.
///
/// Resource caps in the chain route are recorded in the report (with
/// `partial` set) when another method still produced a result.
pub fn run_homology(w: &CoxeterMatrix, opts: &HomologyOptions) -> Result<RunReport> {
    let mut profiles = Vec::new();
    let mut notes = Vec::new();
    let mut timing = BTreeMap::new();
    let mut partial = false;

    if matches!(opts.method, MethodChoice::Auto | MethodChoice::Closed) {
        let start = Instant::now();
        match closed_form_homology(w, opts.order_cap) {
            Ok(p) => {
                timing.insert("closed-form".to_string(), start.elapsed().as_secs_f64() * 1e3);
                profiles.push(p);
            }
            Err(e) if opts.method == MethodChoice::Closed => return Err(e),
            Err(Error::Resource(msg)) => {
                partial = true;
                notes.push(format!("closed form skipped: {msg}"));
            }
            Err(e) => notes.push(format!("closed form not applicable: {e}")),
        }
    }
    if matches!(opts.method, MethodChoice::Auto | MethodChoice::Chain) {
        let start = Instant::now();
        match ChainComputation::run(w, opts.order_cap).and_then(|c| c.profile(opts.max_degree)) {
            Ok(p) => {
                timing.insert("chain".to_string(), start.elapsed().as_secs_f64() * 1e3);
                profiles.push(p);
            }
            Err(Error::Resource(msg)) if !profiles.is_empty() => {
                partial = true;
                notes.push(format!("chain route skipped: {msg}"));
            }
            Err(e) => return Err(e),
        }
    }
    if let Some(top) = opts.max_degree {
        for p in &mut profiles {
            p.groups.retain(|&d, _| d <= top);
        }
    }
    let discrepancies = compare(&profiles);
    let k = profiles.first().map(k_homology);
    Ok(RunReport {
        input: MatrixFile::from(w),
        classification: classify_report(w),
        profiles,
        k_homology: k,
        k_theory_note: K_THEORY_NOTE.to_string(),
        discrepancies,
        notes,
        timing_ms: opts.timing.then_some(timing),
        partial,
    })
}

pub fn run_report_text(r: &RunReport) -> String {
    let mut s = String::new();
    writeln!(s, "spherical subsets s(n) = {:?}", r.classification.spherical_counts).unwrap();
    for p in &r.profiles {
        writeln!(s, "[{} / {}] {}", p.method, p.detail, p).unwrap();
    }
    match &r.k_homology {
        Some(KHomology::Determined { k0, k1 }) => {
            writeln!(s, "K_0 = {k0}, K_1 = {k1}").unwrap();
            writeln!(s, "  = K_*(C*_r W) {}", r.k_theory_note).unwrap();
        }
        Some(KHomology::Undecided { .. }) => {
            writeln!(s, "K-homology undecided: Bredon homology is nonzero above degree 1").unwrap();
        }
        None => {}
    }
    if r.agreed() {
        if r.profiles.len() > 1 {
            writeln!(s, "methods agree").unwrap();
        }
    } else {
        for d in &r.discrepancies {
            writeln!(s, "DISCREPANCY in degree {}: {:?}", d.degree, d.values.iter().map(ToString::to_string).collect::<Vec<_>>()).unwrap();
        }
    }
    for n in &r.notes {
        writeln!(s, "note: {n}").unwrap();
    }
    if let Some(t) = &r.timing_ms {
        for (m, ms) in t {
            writeln!(s, "time {m}: {ms:.1} ms").unwrap();
        }
    }
    s
}

/// One entry of a validation corpus.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorpusEntry {
    #[serde(default)]
    pub name: Option<String>,
    pub rank: usize,
    pub m: Vec<Vec<i64>>,
    /// Expected homology by degree; absent degrees are zero.
    pub expected: BTreeMap<usize, FgAbGroup>,
    #[serde(default)]
    pub order_cap: Option<u128>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValidationEntry {
    pub file: String,
    pub name: String,
    pub ok: bool,
    pub methods: Vec<String>,
    pub problems: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValidationReport {
    pub entries: Vec<ValidationEntry>,
    pub failures: usize,
}

/// Runs every `*.json` file of a corpus directory through all applicable
/// methods and compares with the recorded expectations.
pub fn validate_corpus(dir: &Path) -> Result<ValidationReport> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::Input(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::Input(format!("no inputs in {}", dir.display())));
    }
    let mut entries = Vec::new();
    for path in files {
        let file = path.file_name().unwrap().to_string_lossy().into_owned();
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        let entry: CorpusEntry = serde_json::from_str(&text)
            .map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
        let name = entry.name.clone().unwrap_or_else(|| file.clone());
        let w = MatrixFile { rank: entry.rank, m: entry.m.clone() }.into_matrix()?;
        let opts = HomologyOptions {
            order_cap: entry.order_cap.unwrap_or(DEFAULT_ORDER_CAP),
            ..HomologyOptions::default()
        };
        let mut problems = Vec::new();
        let mut methods = Vec::new();
        match run_homology(&w, &opts) {
            Ok(report) => {
                for d in &report.discrepancies {
                    problems.push(format!("methods disagree in degree {}", d.degree));
                }
                let mut expected = HomologyProfile::new(Method::Chain, "expected");
                for (d, g) in &entry.expected {
                    expected.set(*d, g.clone());
                }
                for p in &report.profiles {
                    methods.push(format!("{} ({})", p.method, p.detail));
                    if !p.same_groups(&expected) {
                        problems.push(format!("{} gives {p}, expected {expected}", p.method));
                    }
                }
                if report.profiles.is_empty() {
                    problems.push("no method produced a result".into());
                }
            }
            Err(e) => problems.push(e.to_string()),
        }
        entries.push(ValidationEntry { file, name, ok: problems.is_empty(), methods, problems });
    }
    let failures = entries.iter().filter(|e| !e.ok).count();
    Ok(ValidationReport { entries, failures })
}

pub fn validation_text(r: &ValidationReport) -> String {
    let mut s = String::new();
    for e in &r.entries {
        let status = if e.ok { "PASS" } else { "FAIL" };
        writeln!(s, "{status} {} [{}]", e.name, e.methods.join(", ")).unwrap();
        for p in &e.problems {
            writeln!(s, "     {p}").unwrap();
        }
    }
    writeln!(s, "{} entries, {} failures", r.entries.len(), r.failures).unwrap();
    s
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CellEntry {
    pub chain: Vec<Vec<usize>>,
    pub stabilizer: String,
    pub coordinates: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlockEntry {
    pub cell: usize,
    pub face: usize,
    pub sign: i8,
    pub kind: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DifferentialEntry {
    pub degree: usize,
    pub rows: usize,
    pub cols: usize,
    pub blocks: Vec<BlockEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CellsReport {
    pub cells: Vec<Vec<CellEntry>>,
    pub differentials: Vec<DifferentialEntry>,
}

/// Cells by dimension with stabilizer types, and the block structure of
/// each differential. Without representation data only the cells are listed.
pub fn cells_report(w: &CoxeterMatrix, cap: u128) -> Result<CellsReport> {
    let poset = enumerate_spherical(w);
    let rings = RepresentationRings::build(w, &poset, cap)?;
    let complex = crate::davis::assemble_differentials(build_cells(&poset, None), &rings)?;
    Ok(describe_complex(&poset, &complex))
}

fn describe_complex(poset: &crate::coxeter::SphericalPoset, cx: &BredonChainComplex) -> CellsReport {
    let cells = cx
        .cells
        .iter()
        .zip(&cx.block_sizes)
        .map(|(layer, sizes)| {
            layer
                .iter()
                .zip(sizes)
                .map(|(c, &n)| CellEntry {
                    chain: c.chain.iter().map(|t| t.to_vec()).collect(),
                    stabilizer: poset.label_of[&c.stabilizer()].to_string(),
                    coordinates: n,
                })
                .collect()
        })
        .collect();
    let differentials = (1..cx.cells.len())
        .map(|d| {
            let index: BTreeMap<_, _> = cx.cells[d - 1].iter().enumerate().map(|(i, c)| (c, i)).collect();
            let mut blocks = Vec::new();
            for (ci, cell) in cx.cells[d].iter().enumerate() {
                for k in 0..cell.chain.len() {
                    let face = cell.face(k);
                    blocks.push(BlockEntry {
                        cell: ci,
                        face: index[&face],
                        sign: if (k + 1) % 2 == 0 { 1 } else { -1 },
                        kind: if k == 0 { "induction".into() } else { "identity".into() },
                    });
                }
            }
            DifferentialEntry {
                degree: d,
                rows: cx.differentials[d].rows(),
                cols: cx.differentials[d].cols(),
                blocks,
            }
        })
        .collect();
    CellsReport { cells, differentials }
}

pub fn cells_text(r: &CellsReport) -> String {
    let mut s = String::new();
    for (d, layer) in r.cells.iter().enumerate() {
        writeln!(s, "dimension {d}: {} cells", layer.len()).unwrap();
        for c in layer {
            let chain: Vec<String> = c
                .chain
                .iter()
                .map(|t| format!("{{{}}}", t.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
                .collect();
            writeln!(s, "  ({})  stabilizer {}  rank {}", chain.join(" < "), c.stabilizer, c.coordinates).unwrap();
        }
    }
    for dif in &r.differentials {
        writeln!(s, "d_{}: {} x {} matrix, {} blocks", dif.degree, dif.rows, dif.cols, dif.blocks.len()).unwrap();
        for b in &dif.blocks {
            let sign = if b.sign > 0 { '+' } else { '-' };
            writeln!(s, "  cell {} -> face {}: {sign}{}", b.cell, b.face, b.kind).unwrap();
        }
    }
    s
}

/// Character tables and induction matrices of all spherical subgroups.
pub fn tables_text(w: &CoxeterMatrix, cap: u128) -> Result<String> {
    let poset = enumerate_spherical(w);
    let rings = RepresentationRings::build(w, &poset, cap)?;
    let mut s = String::new();
    for (t, data) in &rings.subgroups {
        let tab = &data.table;
        writeln!(s, "W_{t}: {} order {} ({:?}), {} classes", data.label, tab.order(), tab.source, tab.len()).unwrap();
        writeln!(s, "  class sizes {:?}", tab.classes.sizes).unwrap();
        for (name, row) in tab.names.iter().zip(&tab.values) {
            let vals: Vec<String> = row
                .iter()
                .map(|z| {
                    let re = if z.re.abs() < 5e-7 { 0.0 } else { z.re };
                    if z.im.abs() < 1e-9 {
                        format!("{re:.4}")
                    } else {
                        format!("{re:.4}{:+.4}i", z.im)
                    }
                })
                .collect();
            writeln!(s, "  {name:>10}: {}", vals.join(" ")).unwrap();
        }
    }
    for ((k, l), ind) in &rings.inductions {
        writeln!(s, "Ind {k} -> {l}:").unwrap();
        for row in &ind.entries {
            writeln!(s, "  {row:?}").unwrap();
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::parse_matrix;

    #[test]
    fn auto_runs_both_routes_on_infinite_dihedral() {
        let w = parse_matrix(&[vec![1, 0], vec![0, 1]]).unwrap();
        let r = run_homology(&w, &HomologyOptions::default()).unwrap();
        assert_eq!(r.profiles.len(), 2);
        assert!(r.agreed());
        assert_eq!(r.k_homology, Some(KHomology::Determined { k0: FgAbGroup::free(3), k1: FgAbGroup::zero() }));
    }

    #[test]
    fn closed_without_formula_is_an_input_error() {
        // Rank 4 with an odd label and infinite group: no closed form.
        let w = parse_matrix(&[
            vec![1, 3, 0, 2],
            vec![3, 1, 3, 2],
            vec![0, 3, 1, 3],
            vec![2, 2, 3, 1],
        ])
        .unwrap();
        let opts = HomologyOptions { method: MethodChoice::Closed, ..HomologyOptions::default() };
        let err = run_homology(&w, &opts).unwrap_err();
        assert_eq!(exit_code(&err), EXIT_INPUT);
    }

    #[test]
    fn json_is_deterministic_without_timing() {
        let w = parse_matrix(&[vec![1, 3, 3], vec![3, 1, 3], vec![3, 3, 1]]).unwrap();
        let a = serde_json::to_string(&run_homology(&w, &HomologyOptions::default()).unwrap()).unwrap();
        let b = serde_json::to_string(&run_homology(&w, &HomologyOptions::default()).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(!a.contains("timing_ms"));
        assert!(a.contains(r#""0":{"free_rank":5,"torsion":[]}"#));
    }

    #[test]
    fn chain_cap_gives_partial_report() {
        // H3 with a cap below 120: closed form fails too, chain errors out.
        let w = parse_matrix(&[vec![1, 5, 2], vec![5, 1, 3], vec![2, 3, 1]]).unwrap();
        let opts = HomologyOptions { order_cap: 50, ..HomologyOptions::default() };
        let err = run_homology(&w, &opts).unwrap_err();
        assert_eq!(exit_code(&err), EXIT_RESOURCE);

        // Infinite group whose only large subgroup is over the cap: the
        // catalog still answers, the chain route is skipped.
        let w = parse_matrix(&[vec![1, 5, 0], vec![5, 1, 0], vec![0, 0, 1]]).unwrap();
        let opts = HomologyOptions { order_cap: 5, ..HomologyOptions::default() };
        let r = run_homology(&w, &opts).unwrap();
        assert!(r.partial);
        assert_eq!(r.profiles.len(), 1);
    }
}
