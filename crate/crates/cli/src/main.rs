use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use knotsurg::census::{bundled_table, load_table, ScanFilter};
use knotsurg::codec::{parse_braid, parse_dt, parse_gauss, parse_pd, CodecError};
use knotsurg::diagram::PlanarDiagram;
use knotsurg::hfk::{hfk_for, HfkTable};
use knotsurg::invariants::{assemble, InvariantError, KnotInvariants};
use knotsurg::obstructions::{brieskorn_filter, full_report, BrieskornFilter, Conclusion, ObstructionReport};
use knotsurg::plumbing::{classify_form, orientation_class, DefinitenessClass, OrientationClass, WeightedTree};
use serde::Serialize;

const EXAMPLES: &str = "\
Examples:
  knotsurg invariants --dt \"4 6 2\"
  knotsurg obstruct --braid \"3: 1 -2 1 -2\"
  knotsurg obstruct --pd @kt.pd --genus 2 --exit-code
  knotsurg hfk --dt \"4 6 8 2\"
  knotsurg plumbing e8.tree
  knotsurg scan --nonalternating --max-crossings 10
  knotsurg brieskorn --dt \"4 6 2\" --format records

Any presentation value starting with @ is read from that file.

Exit status: 0 success, 1 usage or input error, 2 internal invariant
failure, 10 no Seifert fibered 1/q surgery (obstruct --exit-code only).";

#[derive(Parser)]
#[command(name = "knotsurg", version, about = "Knot invariants and Seifert fibered surgery obstructions", after_help = EXAMPLES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Alexander polynomial, signature, torsion coefficients and genus
    Invariants(KnotArgs),
    /// Run every obstruction rule and print the report
    Obstruct {
        #[command(flatten)]
        knot: KnotArgs,
        /// Exit with status 10 when the summary is no-SF-1/q-surgery
        #[arg(long)]
        exit_code: bool,
    },
    /// Knot Floer homology table of an alternating knot
    Hfk(KnotArgs),
    /// Classify a plumbing tree ("v id weight" and "e id id" lines)
    Plumbing {
        /// Tree file; `-` reads standard input
        tree: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Scan a knot table (the bundled ≤10 crossing table by default)
    Scan {
        /// Table file (CSV with columns name,dt,alternating,genus,signature,...)
        table: Option<PathBuf>,
        #[arg(long = "table", conflicts_with = "table")]
        table_flag: Option<PathBuf>,
        #[arg(long, conflicts_with = "alternating")]
        nonalternating: bool,
        #[arg(long)]
        alternating: bool,
        #[arg(long)]
        max_crossings: Option<usize>,
        #[arg(long)]
        min_crossings: Option<usize>,
        /// Print one line per knot
        #[arg(long)]
        list: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Which Brieskorn spheres Σ(2,3,5), Σ(2,3,7) the knot could give
    Brieskorn(KnotArgs),
}

#[derive(Args)]
struct KnotArgs {
    #[command(flatten)]
    input: Input,
    /// Seifert genus, required for non-alternating diagrams
    #[arg(long)]
    genus: Option<u32>,
    /// Name shown in reports
    #[arg(long)]
    name: Option<String>,
    /// Knot Floer table file ("i m rank" rows) for the parity rules
    #[arg(long)]
    hfk_table: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// DT code, e.g. "4 6 2"
    #[arg(long, allow_hyphen_values = true)]
    dt: Option<String>,
    /// Gauss code, e.g. "O1+ U2+ O3+ U1+ O2+ U3+"
    #[arg(long, allow_hyphen_values = true)]
    gauss: Option<String>,
    /// PD notation, e.g. "X[0,4,1,3] X[2,0,3,5] X[4,2,5,1]"
    #[arg(long, allow_hyphen_values = true)]
    pd: Option<String>,
    /// Braid word "s: w1 w2 ..." with s strands
    #[arg(long, allow_hyphen_values = true)]
    braid: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Records,
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<CodecError> for Failure {
    fn from(e: CodecError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<InvariantError> for Failure {
    fn from(e: InvariantError) -> Self {
        match e {
            InvariantError::GenusInconsistent { .. } => Failure::Input(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

fn read_arg(v: &str) -> Result<String, Failure> {
    match v.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}"))),
        None => Ok(v.to_string()),
    }
}

impl KnotArgs {
    fn diagram(&self) -> Result<(String, PlanarDiagram), Failure> {
        let (text, d) = if let Some(v) = &self.input.dt {
            let t = read_arg(v)?;
            let d = knotsurg::codec::realize_dt(&parse_dt(&t)?)?;
            (t, d)
        } else if let Some(v) = &self.input.gauss {
            let t = read_arg(v)?;
            let d = parse_gauss(&t)?.to_diagram()?;
            (t, d)
        } else if let Some(v) = &self.input.pd {
            let t = read_arg(v)?;
            let d = parse_pd(&t)?.to_diagram()?;
            (t, d)
        } else if let Some(v) = &self.input.braid {
            let t = read_arg(v)?;
            let d = parse_braid(&t)?.to_diagram()?;
            (t, d)
        } else {
            unreachable!("clap requires one presentation")
        };
        let name = self.name.clone().unwrap_or_else(|| text.trim().to_string());
        Ok((name, d))
    }

    fn invariants(&self) -> Result<KnotInvariants, Failure> {
        let (name, d) = self.diagram()?;
        Ok(assemble(&name, &d, self.genus)?)
    }

    fn table(&self, inv: &KnotInvariants) -> Result<Option<HfkTable>, Failure> {
        match &self.hfk_table {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
                HfkTable::parse(&text).map(Some).map_err(|e| Failure::Input(e.to_string()))
            }
            None => Ok(hfk_for(inv).ok()),
        }
    }
}

#[derive(Serialize)]
struct InvariantsRecord {
    name: String,
    crossings: usize,
    seifert_circles: usize,
    alternating_diagram: bool,
    alexander: String,
    alexander_coefficients: Vec<String>,
    alexander_degree: u32,
    signature: i64,
    genus: Option<u32>,
    genus_source: String,
    torsion: Vec<String>,
    torsion_sum: String,
    coherence: String,
}

fn invariants_record(inv: &KnotInvariants) -> InvariantsRecord {
    let deg = inv.alexander.degree() as i64;
    let genus_source = serde_json::to_value(inv.genus_source).unwrap();
    InvariantsRecord {
        name: inv.name.clone(),
        crossings: inv.crossings,
        seifert_circles: inv.seifert_circles,
        alternating_diagram: inv.alternating,
        alexander: inv.alexander.to_string(),
        alexander_coefficients: (-deg..=deg).map(|i| inv.alexander.coeff(i).to_string()).collect(),
        alexander_degree: inv.alexander.degree(),
        signature: inv.signature,
        genus: inv.genus,
        genus_source: genus_source.as_str().unwrap_or_default().to_string(),
        torsion: inv.torsion.values.iter().map(|v| v.to_string()).collect(),
        torsion_sum: inv.torsion.total().to_string(),
        coherence: inv.coherence().class.to_string(),
    }
}

#[derive(Serialize)]
struct VerdictRecord {
    rule: &'static str,
    applicability: String,
    conclusion: String,
    witness: String,
    citation: &'static str,
}

#[derive(Serialize)]
struct BrieskornRecord {
    sigma_2_3_5: Option<i64>,
    sigma_2_3_7: Vec<i64>,
    needs_genus: bool,
}

impl From<&BrieskornFilter> for BrieskornRecord {
    fn from(b: &BrieskornFilter) -> Self {
        BrieskornRecord { sigma_2_3_5: b.sigma_235, sigma_2_3_7: b.sigma_237.clone(), needs_genus: b.needs_genus }
    }
}

#[derive(Serialize)]
struct ReportRecord {
    knot: String,
    invariants: InvariantsRecord,
    verdicts: Vec<VerdictRecord>,
    summary: String,
    brieskorn: BrieskornRecord,
}

fn report_record(inv: &KnotInvariants, r: &ObstructionReport) -> ReportRecord {
    ReportRecord {
        knot: r.knot.clone(),
        invariants: invariants_record(inv),
        verdicts: r
            .verdicts
            .iter()
            .map(|v| VerdictRecord {
                rule: v.rule.id(),
                applicability: v.applicability.to_string(),
                conclusion: v.conclusion.to_string(),
                witness: v.witness.clone(),
                citation: v.citation,
            })
            .collect(),
        summary: r.summary.to_string(),
        brieskorn: (&r.brieskorn).into(),
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("records serialize") + "\n"
}

fn invariants_text(inv: &KnotInvariants) -> String {
    let r = invariants_record(inv);
    let mut s = String::new();
    writeln!(s, "knot:            {}", r.name).unwrap();
    writeln!(s, "crossings:       {}", r.crossings).unwrap();
    writeln!(s, "seifert circles: {}", r.seifert_circles).unwrap();
    writeln!(s, "alternating:     {}", if r.alternating_diagram { "yes" } else { "not certified" }).unwrap();
    writeln!(s, "alexander:       {}", r.alexander).unwrap();
    writeln!(s, "signature:       {}", r.signature).unwrap();
    let g = r.genus.map_or("unknown".to_string(), |g| g.to_string());
    writeln!(s, "genus:           {g} ({})", r.genus_source).unwrap();
    writeln!(s, "torsion:         [{}] (sum {})", r.torsion.join(", "), r.torsion_sum).unwrap();
    writeln!(s, "coherence:       {}", r.coherence).unwrap();
    s
}

fn brieskorn_text(b: &BrieskornFilter) -> String {
    let mut s = String::new();
    match b.sigma_235 {
        Some(r) => writeln!(s, "Σ(2,3,5): possible at r = {r:+}").unwrap(),
        None => writeln!(s, "Σ(2,3,5): impossible").unwrap(),
    }
    if b.sigma_237.is_empty() {
        writeln!(s, "Σ(2,3,7): impossible").unwrap();
    } else {
        let rs: Vec<String> = b.sigma_237.iter().map(|r| format!("{r:+}")).collect();
        writeln!(s, "Σ(2,3,7): possible at r = {}", rs.join(", ")).unwrap();
    }
    if b.needs_genus {
        writeln!(s, "(polynomial matches; supply --genus to decide)").unwrap();
    }
    s
}

fn report_text(inv: &KnotInvariants, r: &ObstructionReport) -> String {
    let mut s = invariants_text(inv);
    writeln!(s).unwrap();
    for v in &r.verdicts {
        writeln!(s, "[{}] {} -> {}", v.rule.id(), v.applicability, v.conclusion).unwrap();
        writeln!(s, "    witness: {}", v.witness).unwrap();
        writeln!(s, "    rule: {}", v.citation).unwrap();
    }
    writeln!(s).unwrap();
    writeln!(s, "summary: {}", r.summary).unwrap();
    s.push_str(&brieskorn_text(&r.brieskorn));
    s
}

#[derive(Serialize)]
struct PlumbingRecord {
    vertices: usize,
    class: &'static str,
    bad_points: Vec<u64>,
    bad_point_count: usize,
    orientation: &'static str,
}

#[derive(Serialize)]
struct ScanRow {
    name: String,
    alternating: bool,
    crossings: usize,
    signature: i64,
    genus: Option<u32>,
    torsion: Vec<String>,
    coherence: String,
    summary: String,
    warnings: Vec<String>,
}

#[derive(Serialize)]
struct ScanRecord {
    total: usize,
    by_coherence: std::collections::BTreeMap<String, usize>,
    by_summary: std::collections::BTreeMap<String, usize>,
    parity_rule_applied: usize,
    failures: Vec<(String, String)>,
    bad_rows: Vec<String>,
    knots: Vec<ScanRow>,
}

fn run(cli: Cli) -> Result<(String, u8), Failure> {
    match cli.command {
        Command::Invariants(k) => {
            let inv = k.invariants()?;
            let out = match k.format {
                Format::Text => invariants_text(&inv),
                Format::Records => json(&invariants_record(&inv)),
            };
            Ok((out, 0))
        }
        Command::Obstruct { knot, exit_code } => {
            let inv = knot.invariants()?;
            let table = knot.table(&inv)?;
            let r = full_report(&inv, table.as_ref());
            if r.torsion_bound_violated() {
                return Err(Failure::Internal(format!("alternating torsion bound fails for {}", r.knot)));
            }
            let out = match knot.format {
                Format::Text => report_text(&inv, &r),
                Format::Records => json(&report_record(&inv, &r)),
            };
            let code = if exit_code && r.summary == Conclusion::NoSfSurgery { 10 } else { 0 };
            Ok((out, code))
        }
        Command::Hfk(k) => {
            let inv = k.invariants()?;
            let h = hfk_for(&inv).map_err(|e| Failure::Input(format!("{e}; only alternating diagrams have computed tables")))?;
            let out = match k.format {
                Format::Text => format!("# i m rank\n{h}"),
                Format::Records => {
                    let rows: Vec<serde_json::Value> = h
                        .ranks
                        .iter()
                        .rev()
                        .map(|(&(i, m2), &r)| serde_json::json!({"alexander": i, "maslov_twice": m2, "rank": r}))
                        .collect();
                    json(&rows)
                }
            };
            Ok((out, 0))
        }
        Command::Plumbing { tree, format } => {
            let text = if tree.as_os_str() == "-" {
                std::io::read_to_string(std::io::stdin()).map_err(|e| Failure::Input(e.to_string()))?
            } else {
                std::fs::read_to_string(&tree).map_err(|e| Failure::Input(format!("{}: {e}", tree.display())))?
            };
            let t = WeightedTree::parse(&text).map_err(|e| Failure::Input(e.to_string()))?;
            let c = classify_form(&t);
            let rec = PlumbingRecord {
                vertices: t.len(),
                class: match c.class {
                    DefinitenessClass::NegativeDefinite => "negative-definite",
                    DefinitenessClass::NegativeSemiDefinite => "negative-semi-definite",
                    DefinitenessClass::Other => "other",
                },
                bad_points: t.bad_points(),
                bad_point_count: c.bad_point_count,
                orientation: match orientation_class(&t) {
                    OrientationClass::PositiveSeifert => "positive-seifert",
                    OrientationClass::NotCertified => "not-certified",
                },
            };
            let out = match format {
                Format::Records => json(&rec),
                Format::Text => {
                    let bad: Vec<String> = rec.bad_points.iter().map(|v| v.to_string()).collect();
                    format!(
                        "vertices:    {}\nform:        {}\nbad points:  {} [{}]\norientation: {}\n",
                        rec.vertices,
                        rec.class,
                        rec.bad_point_count,
                        bad.join(", "),
                        rec.orientation
                    )
                }
            };
            Ok((out, 0))
        }
        Command::Scan { table, table_flag, nonalternating, alternating, max_crossings, min_crossings, list, format } => {
            let (records, bad) = match table.or(table_flag) {
                Some(p) => load_table(&p).map_err(|e| Failure::Input(e.to_string()))?,
                None => (bundled_table(), Vec::new()),
            };
            let filter = ScanFilter {
                alternating: if nonalternating {
                    Some(false)
                } else if alternating {
                    Some(true)
                } else {
                    None
                },
                max_crossings,
                min_crossings,
            };
            let s = knotsurg::census::scan(&records, |r| filter.matches(r));
            let rec = ScanRecord {
                total: s.total(),
                by_coherence: s.by_coherence.clone(),
                by_summary: s.by_summary.clone(),
                parity_rule_applied: s.parity_rule_applied,
                failures: s.failures.clone(),
                bad_rows: bad.iter().map(|e| e.to_string()).collect(),
                knots: s
                    .results
                    .iter()
                    .map(|r| ScanRow {
                        name: r.record.name.clone(),
                        alternating: r.record.alternating,
                        crossings: r.invariants.crossings,
                        signature: r.invariants.signature,
                        genus: r.invariants.genus,
                        torsion: r.invariants.torsion.values.iter().map(|v| v.to_string()).collect(),
                        coherence: r.invariants.coherence().class.to_string(),
                        summary: r.report.summary.to_string(),
                        warnings: r.warnings.clone(),
                    })
                    .collect(),
            };
            let out = match format {
                Format::Records => json(&rec),
                Format::Text => {
                    let mut o = String::new();
                    if list {
                        writeln!(o, "{:<10} {:>3} {:>4} {:>5}  {:<14} {:<32} torsion", "knot", "c", "σ", "g", "coherence", "summary").unwrap();
                        for k in &rec.knots {
                            let g = k.genus.map_or("-".to_string(), |g| g.to_string());
                            writeln!(
                                o,
                                "{:<10} {:>3} {:>4} {:>5}  {:<14} {:<32} [{}]",
                                k.name,
                                k.crossings,
                                k.signature,
                                g,
                                k.coherence,
                                k.summary,
                                k.torsion.join(", ")
                            )
                            .unwrap();
                            for w in &k.warnings {
                                writeln!(o, "    warning: {w}").unwrap();
                            }
                        }
                        writeln!(o).unwrap();
                    }
                    writeln!(o, "knots scanned: {}", rec.total).unwrap();
                    for (c, n) in &rec.by_coherence {
                        writeln!(o, "  {c}: {n}").unwrap();
                    }
                    writeln!(o, "summaries:").unwrap();
                    for (c, n) in &rec.by_summary {
                        writeln!(o, "  {c}: {n}").unwrap();
                    }
                    writeln!(o, "alternating parity rule applied: {}", rec.parity_rule_applied).unwrap();
                    for (n, e) in &rec.failures {
                        writeln!(o, "failed: {n}: {e}").unwrap();
                    }
                    for b in &rec.bad_rows {
                        writeln!(o, "skipped: {b}").unwrap();
                    }
                    o
                }
            };
            Ok((out, 0))
        }
        Command::Brieskorn(k) => {
            let inv = k.invariants()?;
            let b = brieskorn_filter(&inv);
            let out = match k.format {
                Format::Text => format!("knot: {}\n{}", inv.name, brieskorn_text(&b)),
                Format::Records => json(&BrieskornRecord::from(&b)),
            };
            Ok((out, 0))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(2)
        }
    }
}
