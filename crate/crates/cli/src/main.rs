use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use conic_nets::classify::{self, Classifier, ClassifyError, LineOrbit, PlaneOrbit};
use conic_nets::gf::{Fe, Field};
use conic_nets::group::{self, GroupError};
use conic_nets::pg::{self, NetInput, Subspace, SymPoint, Vec6};
use conic_nets::reps::{self, RepParams};
use conic_nets::tables;
use conic_nets::verify::{self, VerifyOptions};

const EXIT_USAGE: u8 = 1;
const EXIT_FIELD: u8 = 2;
const EXIT_NOT_RANK_ONE: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(name = "conic-nets", version, about = "Orbits of pencils and rank-one nets of conics over GF(q), q odd")]
struct Cli {
    /// Worker threads for parallel scans (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Field order, an odd prime power
    #[arg(long)]
    q: u64,

    /// Defining polynomial as comma-separated coefficients, constant term
    /// first, e.g. `2,2,1` for x^2+2x+2 over GF(3)
    #[arg(long)]
    modulus: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the net of conics spanned by three forms read from FILE
    /// (`-` for stdin): three lines of six coefficients of
    /// X0^2 X0X1 X0X2 X1^2 X1X2 X2^2 as element indices
    ClassifyNet {
        #[command(flatten)]
        field: FieldArgs,
        file: PathBuf,
        /// Also compute the stabilizer order by a full group scan
        #[arg(long)]
        stabilizer: bool,
        /// Allow the stabilizer scan for 9 <= q <= 13
        #[arg(long)]
        force: bool,
        /// Print JSON instead of text
        #[arg(long)]
        json: bool,
    },
    /// Classify the pencil spanned by two rows of six element indices in FILE
    ClassifyLine {
        #[command(flatten)]
        field: FieldArgs,
        file: PathBuf,
        /// Read the rows as matrix coordinates y0..y5 instead of form coefficients
        #[arg(long)]
        matrix: bool,
    },
    /// Classify one conic given as six comma-separated element indices
    ClassifyPoint {
        #[command(flatten)]
        field: FieldArgs,
        coords: String,
        /// Read the indices as matrix coordinates y0..y5 instead of form coefficients
        #[arg(long)]
        matrix: bool,
    },
    /// Print orbit representatives and the parameters chosen for them
    Reps {
        #[command(flatten)]
        field: FieldArgs,
        /// A single line or plane orbit label, e.g. `o15,1` or `S14'`
        #[arg(long)]
        orbit: Option<String>,
    },
    /// Recompute every table and compare with the stored expressions
    VerifyTables {
        /// Field order (ignored when --q-list is given)
        #[arg(long, required_unless_present = "q_list")]
        q: Option<u64>,
        /// Comma-separated list of field orders
        #[arg(long, value_delimiter = ',')]
        q_list: Option<Vec<u64>>,
        #[arg(long)]
        modulus: Option<String>,
        /// Write the machine-readable report to PATH
        #[arg(long)]
        json: Option<PathBuf>,
        /// Run the brute-force stabilizer check even above q = 5
        #[arg(long)]
        stabilizers: bool,
        /// Lift the cost guard on stabilizer scans
        #[arg(long)]
        force: bool,
        /// Random translates of each plane representative to reclassify
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Brute-force stabilizer of an orbit representative
    Stabilizer {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        orbit: String,
        #[arg(long)]
        force: bool,
        /// Print the stabilizer elements
        #[arg(long)]
        dump: bool,
    },
    /// Compute the line-orbit distribution of every plane orbit from scratch
    Census {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        json: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Failure {
        let code = match e {
            ClassifyError::NotRankOne => EXIT_NOT_RANK_ONE,
            ClassifyError::InternalInconsistency(_) => EXIT_INTERNAL,
            _ => EXIT_USAGE,
        };
        fail(code, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn make_field(q: u64, modulus: Option<&str>) -> Result<Field, Failure> {
    let result = match modulus {
        None => Field::new(q),
        Some(m) => {
            let coeffs: Result<Vec<u32>, _> = m.split(',').map(|c| c.trim().parse::<u32>()).collect();
            let coeffs = coeffs.map_err(|_| fail(EXIT_FIELD, format!("bad modulus `{m}`")))?;
            Field::with_modulus(q, &coeffs)
        }
    };
    result.map_err(|e| fail(EXIT_FIELD, e.to_string()))
}

fn field_of(a: &FieldArgs) -> Result<Field, Failure> {
    make_field(a.q, a.modulus.as_deref())
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", path.display())))
    }
}

fn parse_indices(f: &Field, text: &str) -> Result<Vec6, Failure> {
    let vals: Vec<&str> = text.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
    if vals.len() != 6 {
        return Err(fail(EXIT_USAGE, format!("expected 6 indices, found {}", vals.len())));
    }
    let mut out = [Fe::ZERO; 6];
    for (slot, v) in out.iter_mut().zip(vals) {
        let n: u64 = v.parse().map_err(|_| fail(EXIT_USAGE, format!("`{v}` is not an element index")))?;
        *slot = f.element(n).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    }
    Ok(out)
}

/// Matrix coordinates of a row, converting form coefficients unless `matrix`.
fn as_point_vector(f: &Field, row: Vec6, matrix: bool) -> Vec6 {
    if matrix {
        row
    } else {
        let net = NetInput { forms: [row, [Fe::ZERO; 6], [Fe::ZERO; 6]] };
        net.gram_vectors(f)[0]
    }
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::ClassifyNet { field, file, stabilizer, force, json } => {
            let f = field_of(&field)?;
            let net = NetInput::parse(&f, &read_input(&file)?).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
            let plane = pg::net_to_plane(&f, &net).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
            classify_net(&f, &plane, stabilizer, force, json)
        }
        Command::ClassifyLine { field, file, matrix } => {
            let f = field_of(&field)?;
            let text = read_input(&file)?;
            let rows: Vec<&str> =
                text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty()).collect();
            if rows.len() != 2 {
                return Err(fail(EXIT_USAGE, format!("expected 2 rows, found {}", rows.len())));
            }
            let a = as_point_vector(&f, parse_indices(&f, rows[0])?, matrix);
            let b = as_point_vector(&f, parse_indices(&f, rows[1])?, matrix);
            let line = Subspace::line(&f, &a, &b).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
            let c = Classifier::new(&f);
            let o = c.classify_line(&line)?;
            println!("orbit: {o}");
            println!("point distribution: {}", classify::point_distribution(&f, &line));
            println!("stabilizer order: {}", tables::line_stabilizer_order(o, f.q() as u64));
            Ok(())
        }
        Command::ClassifyPoint { field, coords, matrix } => {
            let f = field_of(&field)?;
            let v = as_point_vector(&f, parse_indices(&f, &coords)?, matrix);
            let p = SymPoint::new(&f, v).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
            println!("point: {:?}", p.coords().map(|x| x.index()));
            println!("rank: {}", p.rank(&f));
            println!("class: {:?}", classify::classify_point(&f, &p));
            Ok(())
        }
        Command::Reps { field, orbit } => {
            let f = field_of(&field)?;
            print_reps(&f, orbit.as_deref())
        }
        Command::VerifyTables { q, q_list, modulus, json, stabilizers, force, samples } => {
            let qs = q_list.unwrap_or_else(|| q.into_iter().collect());
            verify_tables(&qs, modulus.as_deref(), json.as_deref(), stabilizers, force, samples)
        }
        Command::Stabilizer { field, orbit, force, dump } => {
            let f = field_of(&field)?;
            stabilizer(&f, &orbit, force, dump)
        }
        Command::Census { field, json } => {
            let f = field_of(&field)?;
            census(&f, json)
        }
    }
}

fn group_failure(e: GroupError) -> Failure {
    fail(EXIT_USAGE, e.to_string())
}

fn classify_net(f: &Field, plane: &Subspace, with_stab: bool, force: bool, json: bool) -> Result<(), Failure> {
    let c = Classifier::new(f);
    let (o, points, lines) = c.classify_plane_full(plane)?;
    let stab = if with_stab { Some(group::stabilizer_order(f, plane, force).map_err(group_failure)?) } else { None };
    if json {
        let v = serde_json::json!({
            "schema": verify::SCHEMA,
            "q": f.q(),
            "orbit": o,
            "point_distribution": points,
            "line_distribution": lines,
            "stabilizer_order": stab,
        });
        println!("{}", serde_json::to_string_pretty(&v).unwrap());
    } else {
        println!("orbit: {o}");
        println!("point distribution: {points}");
        println!("line-orbit distribution: {lines}");
        if let Some(n) = stab {
            println!("stabilizer order: {n}");
            println!("orbit size: {}", group::group_order(f.q() as u64) / n);
        }
    }
    Ok(())
}

fn matrix_text(rows: &[[&str; 3]; 3]) -> String {
    let width = rows.iter().flatten().map(|s| s.chars().count()).max().unwrap_or(1);
    rows.iter()
        .map(|r| {
            let cells: Vec<String> = r.iter().map(|s| format!("{s:>width$}")).collect();
            format!("    [ {} ]", cells.join("  "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn basis_text(s: &Subspace) -> String {
    s.basis().iter().map(|v| format!("    {:?}", v.map(|x| x.index()))).collect::<Vec<_>>().join("\n")
}

fn header(label: &str, condition: &str, params: &str) -> String {
    [label, condition, params].iter().filter(|s| !s.is_empty()).copied().collect::<Vec<_>>().join("  ")
}

fn print_reps(f: &Field, only: Option<&str>) -> Result<(), Failure> {
    let q = f.q() as u64;
    let p = RepParams::new(f).map_err(|e| fail(EXIT_INTERNAL, e.to_string()))?;
    let (mut lines, mut planes): (Vec<LineOrbit>, Vec<PlaneOrbit>) = (LineOrbit::ALL.to_vec(), PlaneOrbit::all_for(q));
    if let Some(label) = only {
        if let Ok(l) = label.parse::<LineOrbit>() {
            lines = vec![l];
            planes.clear();
        } else if let Ok(s) = label.parse::<PlaneOrbit>() {
            lines.clear();
            planes = vec![s];
        } else {
            return Err(fail(EXIT_USAGE, format!("unknown orbit label `{label}`")));
        }
    }
    println!("q = {q}, ε = {}", p.epsilon);
    for o in lines {
        let t = reps::line_template(o);
        let rep = reps::line_rep(f, &p, o).map_err(|e| fail(EXIT_INTERNAL, e.to_string()))?;
        println!("{}", header(&o.to_string(), t.condition, &reps::line_param_text(o, &p)));
        println!("{}", matrix_text(&t.rows));
        println!("  basis:\n{}", basis_text(&rep));
    }
    for o in planes {
        let t = reps::plane_template(o);
        let rep = reps::plane_rep(f, &p, o).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
        println!("{}", header(&o.to_string(), t.condition, &reps::plane_param_text(o, &p)));
        println!("{}", matrix_text(&t.rows));
        println!("  basis:\n{}", basis_text(&rep));
    }
    Ok(())
}

fn verify_tables(
    qs: &[u64],
    modulus: Option<&str>,
    json: Option<&Path>,
    stabilizers: bool,
    force: bool,
    samples: usize,
) -> Result<(), Failure> {
    if qs.is_empty() {
        return Err(fail(EXIT_USAGE, "no field order given"));
    }
    let mut reports = Vec::new();
    for &q in qs {
        let f = make_field(q, modulus)?;
        let mut opts = VerifyOptions::for_q(q);
        opts.stabilizers |= stabilizers;
        opts.force = force;
        opts.samples = samples;
        let start = Instant::now();
        let report = verify::verify(&f, &opts).map_err(|e| fail(EXIT_INTERNAL, e.to_string()))?;
        print!("{}", report.to_human());
        eprintln!("q = {q}: {:.2?}", start.elapsed());
        reports.push(report);
    }
    if let Some(path) = json {
        let doc = serde_json::json!({ "schema": verify::SCHEMA, "reports": reports });
        let text = serde_json::to_string_pretty(&doc).unwrap() + "\n";
        fs::write(path, text).map_err(|e| fail(EXIT_USAGE, format!("{}: {e}", path.display())))?;
    }
    if reports.iter().any(|r| r.has_mismatch()) {
        return Err(fail(EXIT_INTERNAL, "some computed values do not match the tables"));
    }
    Ok(())
}

fn stabilizer(f: &Field, label: &str, force: bool, dump: bool) -> Result<(), Failure> {
    let q = f.q() as u64;
    let p = RepParams::new(f).map_err(|e| fail(EXIT_INTERNAL, e.to_string()))?;
    let (rep, expected) = if let Ok(l) = label.parse::<LineOrbit>() {
        let rep = reps::line_rep(f, &p, l).map_err(|e| fail(EXIT_INTERNAL, e.to_string()))?;
        (rep, tables::line_stabilizer_order(l, q))
    } else if let Ok(s) = label.parse::<PlaneOrbit>() {
        let rep = reps::plane_rep(f, &p, s).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
        (rep, tables::plane_stabilizer_order(s, q))
    } else {
        return Err(fail(EXIT_USAGE, format!("unknown orbit label `{label}`")));
    };
    let start = Instant::now();
    let elements = group::stabilizer(f, &rep, force).map_err(group_failure)?;
    eprintln!("scan: {:.2?}", start.elapsed());
    let n = elements.len() as u64;
    println!("stabilizer order: {n} (expected {expected})");
    println!("orbit size: {}", group::group_order(q) / n);
    if dump {
        for g in &elements {
            println!("{:?}", g.matrix().map(|r| r.map(|x| x.index())));
        }
    }
    if n != expected {
        return Err(fail(EXIT_INTERNAL, "stabilizer order differs from the table"));
    }
    Ok(())
}

fn census(f: &Field, json: bool) -> Result<(), Failure> {
    let q = f.q() as u64;
    let p = RepParams::new(f).map_err(|e| fail(EXIT_INTERNAL, e.to_string()))?;
    let c = Classifier::new(f);
    let mut rows = Vec::new();
    for o in PlaneOrbit::all_for(q) {
        let rep = reps::plane_rep(f, &p, o).map_err(|e| fail(EXIT_INTERNAL, e.to_string()))?;
        let (points, lines) = c.analyse_plane(&rep)?;
        rows.push((o, points, lines));
    }
    if json {
        let v: Vec<serde_json::Value> = rows
            .iter()
            .map(|(o, pd, ld)| serde_json::json!({ "orbit": o, "point_distribution": pd, "line_distribution": ld }))
            .collect();
        let doc = serde_json::json!({ "schema": verify::SCHEMA, "q": q, "planes": v });
        println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        return Ok(());
    }
    print!("{:<6}", "");
    for l in LineOrbit::ALL {
        print!("{:>7}", l.label());
    }
    println!("{:>8}", "total");
    for (o, _, ld) in &rows {
        print!("{:<6}", o.label());
        for l in LineOrbit::ALL {
            print!("{:>7}", ld.get(l));
        }
        println!("{:>8}", ld.total());
    }
    Ok(())
}
