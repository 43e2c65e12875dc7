mod report;
mod selftest;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use grpext::abelian::element_order;
use grpext::autring::{conjugacy, parse_matrix};
use grpext::blackbox::{parse_group, write_semidirect, ElementCode, GroupHandle};
use grpext::classes::{class_representatives, class_triples, representative_group};
use grpext::decomp::standard_decomposition;
use grpext::iso::{build_mu, conjugation_action, interleaved_decompositions, isomorphic_from, verify_isomorphism, IsoResult, VerifyMode};
use grpext::Error;

use report::{digest, join, Report};

#[derive(Parser)]
#[command(name = "grpext", version, about = "Isomorphism testing for coprime cyclic extensions of abelian groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Verify {
    /// Exhaustive up to 512 elements, sampled above.
    Auto,
    Exhaustive,
    Sampled,
}

#[derive(Subcommand)]
enum Command {
    /// Order of an element.
    Order { file: PathBuf, element: String },
    /// Standard decomposition `A ⋊ ⟨y⟩` with the smallest `|y|`.
    StandardDecomposition { file: PathBuf },
    /// Decide isomorphism and check the resulting map.
    Isomorphic {
        g: PathBuf,
        h: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        verify: Verify,
        /// Seed for sampled verification.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Conjugacy of two automorphism matrices of the same type.
    Conjugacy {
        m1: PathBuf,
        m2: PathBuf,
        /// Bound used when computing matrix orders.
        #[arg(long)]
        order_cap: u64,
    },
    /// Isomorphism classes of `Z_{3^i}^r ⋊ Z_4`.
    CountClasses {
        #[arg(long)]
        r: usize,
        /// Write one group file per class with exponent `i`.
        #[arg(long)]
        emit_reps: Option<u32>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Run the small oracle suites.
    Selftest,
}

pub struct Failure {
    code: u8,
    msg: String,
    /// A partial report still printed on stdout.
    report: Option<String>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::Malformed(_) | Error::MatrixConstraint { .. } | Error::PTypeMismatch => 2,
            Error::NotInClass | Error::NotAbelian | Error::NotInvertible | Error::Condition3 { .. } => 3,
            _ => 1,
        };
        Failure {
            code,
            msg: e.to_string(),
            report: None,
        }
    }
}

fn usage(msg: String) -> Failure {
    Failure { code: 2, msg, report: None }
}

pub type Out = Result<String, Failure>;

fn read(path: &Path) -> Result<(String, Vec<u8>), Failure> {
    let bytes = std::fs::read(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| usage(format!("{}: not UTF-8", path.display())))?;
    Ok((text, bytes))
}

fn mem_cap() -> Result<Option<usize>, Failure> {
    match std::env::var("GRPEXT_MEM_MB") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map(Some)
            .map_err(|_| usage(format!("GRPEXT_MEM_MB must be a number of megabytes, got {v:?}"))),
        Err(_) => Ok(None),
    }
}

fn load(path: &Path, report: &mut Report) -> Result<GroupHandle, Failure> {
    let (text, bytes) = read(path)?;
    report.input(&path.display().to_string(), &bytes);
    let spec = parse_group(&text).map_err(|e| Failure::from(e).with_path(path))?;
    let mut h = spec.into_handle();
    if let Some(mb) = mem_cap()? {
        h.set_table_memory_mb(mb);
    }
    Ok(h)
}

impl Failure {
    fn with_path(mut self, path: &Path) -> Self {
        self.msg = format!("{}: {}", path.display(), self.msg);
        self
    }
}

fn cmd_order(file: &Path, element: &str) -> Out {
    let mut r = Report::new(&format!("order {} {element}", file.display()));
    let g = load(file, &mut r)?;
    let x = g.parse_element(element)?;
    g.reset_ops();
    let n = element_order(&g, &x)?;
    r.line("element", &x);
    r.line("order", n);
    r.line("ops", g.ops());
    Ok(r.finish())
}

fn cmd_standard_decomposition(file: &Path) -> Out {
    let mut r = Report::new(&format!("standard-decomposition {}", file.display()));
    let g = load(file, &mut r)?;
    g.reset_ops();
    let sd = standard_decomposition(&g)?;
    let action = conjugation_action(&g, &sd)?;
    r.line("gamma", sd.gamma);
    r.line("group-order", sd.group_order);
    r.line("a-order", sd.a_order());
    r.line("a-type", join(&sd.a_basis.orders));
    for (x, q) in sd.a_basis.elements.iter().zip(&sd.a_basis.orders) {
        r.line("basis", format!("{x} order {q}"));
    }
    r.line("y", &sd.y);
    r.blocks("action", &action.matrix);
    for c in &sd.candidates {
        match c.outcome {
            Ok(n) => r.line("candidate", format!("m {} covers {n}", c.m)),
            Err(step) => r.line("candidate", format!("m {} fails step {step}", c.m)),
        }
    }
    r.line("ops", g.ops());
    Ok(r.finish())
}

const AUTO_EXHAUSTIVE: u128 = 512;

fn cmd_isomorphic(gp: &Path, hp: &Path, verify: Verify, seed: u64) -> Out {
    let mode_name = match verify {
        Verify::Auto => "auto",
        Verify::Exhaustive => "exhaustive",
        Verify::Sampled => "sampled",
    };
    let mut r = Report::new(&format!(
        "isomorphic {} {} --verify {mode_name} --seed {seed}",
        gp.display(),
        hp.display()
    ));
    let g = load(gp, &mut r)?;
    let h = load(hp, &mut r)?;
    g.reset_ops();
    h.reset_ops();
    let (sd_g, sd_h, stats) = interleaved_decompositions(&g, &h)?;
    r.line("first-decomposed", if stats.first == 0 { "g" } else { "h" });
    let result = isomorphic_from(&g, &h, sd_g, sd_h)?;
    match &result {
        IsoResult::NotIsomorphic(why) => {
            r.line("verdict", "no");
            r.line("reason", why.condition());
            r.line("detail", format!("{why:?}"));
        }
        IsoResult::Isomorphic(w) => {
            r.line("verdict", "yes");
            r.line("gamma", w.gamma);
            r.line("k", w.k);
            r.line("a-type", join(&w.sd_g.a_basis.orders));
            r.blocks("psi", &w.psi);
            let mu = build_mu(&g, &h, w)?;
            let map = |x: &ElementCode| mu.apply(x);
            let mode = match verify {
                Verify::Exhaustive => VerifyMode::Exhaustive,
                Verify::Sampled => VerifyMode::Sampled { seed },
                Verify::Auto if w.sd_g.group_order <= AUTO_EXHAUSTIVE => VerifyMode::Exhaustive,
                Verify::Auto => VerifyMode::Sampled { seed },
            };
            let ok = verify_isomorphism(&g, &h, &map, mode)?;
            let name = match mode {
                VerifyMode::Exhaustive => "exhaustive".to_string(),
                VerifyMode::Sampled { seed } => format!("sampled seed {seed}"),
            };
            r.line("mu-check", format!("{name} {}", if ok { "pass" } else { "fail" }));
            if !ok {
                return Err(Failure {
                    code: 1,
                    msg: "witness failed verification".into(),
                    report: Some(r.finish()),
                });
            }
        }
    }
    r.line("ops", format!("g {} h {}", g.ops(), h.ops()));
    Ok(r.finish())
}

fn cmd_conjugacy(p1: &Path, p2: &Path, cap: u64) -> Out {
    let mut r = Report::new(&format!("conjugacy {} {} --order-cap {cap}", p1.display(), p2.display()));
    let mut load_matrix = |p: &Path| -> Result<_, Failure> {
        let (text, bytes) = read(p)?;
        r.input(&p.display().to_string(), &bytes);
        parse_matrix(&text).map_err(|e| Failure::from(e).with_path(p))
    };
    let u1 = load_matrix(p1)?;
    let u2 = load_matrix(p2)?;
    if u1.ptype() != u2.ptype() {
        return Err(Error::PTypeMismatch.into());
    }
    let t = u1.ptype().clone();
    r.line("ptype", &t);
    match conjugacy(&t, &u1, &u2, cap)? {
        Some(u) => {
            r.line("verdict", "yes");
            r.matrix("conjugator", &u);
        }
        None => r.line("verdict", "no"),
    }
    Ok(r.finish())
}

fn cmd_count_classes(rank: usize, emit: Option<u32>, out_dir: &Path) -> Out {
    if rank == 0 {
        return Err(usage("--r must be positive".into()));
    }
    let mut cmd = format!("count-classes --r {rank}");
    if let Some(i) = emit {
        cmd.push_str(&format!(" --emit-reps {i} --out-dir {}", out_dir.display()));
    }
    let mut r = Report::new(&cmd);
    let triples = class_triples(rank);
    r.line("count", triples.len());
    for t in &triples {
        r.line("class", t);
    }
    if let Some(i) = emit {
        std::fs::create_dir_all(out_dir).map_err(|e| usage(format!("{}: {e}", out_dir.display())))?;
        for rep in class_representatives(rank, i)? {
            let spec = representative_group(&rep)?;
            let t = rep.triple;
            let name = format!("rep-r{rank}-i{i}-{}-{}-{}.grp", t.k1, t.k2, t.k3);
            let text = format!("# class {t} of Z_{}^{rank} : Z_4\n{}", 3u64.pow(i), write_semidirect(&spec));
            let path = out_dir.join(&name);
            std::fs::write(&path, &text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let tag = if rep.corrected { " corrected" } else { "" };
            r.line("wrote", format!("{name} class {t} sha256 {}{tag}", digest(text.as_bytes())));
        }
    }
    Ok(r.finish())
}

fn run(cli: Cli) -> Out {
    match cli.command {
        Command::Order { file, element } => cmd_order(&file, &element),
        Command::StandardDecomposition { file } => cmd_standard_decomposition(&file),
        Command::Isomorphic { g, h, verify, seed } => cmd_isomorphic(&g, &h, verify, seed),
        Command::Conjugacy { m1, m2, order_cap } => cmd_conjugacy(&m1, &m2, order_cap),
        Command::CountClasses { r, emit_reps, out_dir } => cmd_count_classes(r, emit_reps, &out_dir),
        Command::Selftest => selftest::run(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            if let Some(out) = &f.report {
                print!("{out}");
            }
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
