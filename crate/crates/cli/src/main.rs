use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use parind_core::ext::{ext_ht, ext_ht_table, ext_t, ext_t_table, CharEntry, CharMultiset};
use parind_core::functors::{induce, right_adjoint};
use parind_core::harness::{verify_all, Fault, ReportBundle, Selection, VerificationReport};
use parind_core::hecke::{HCharacterKind, HModule, HTModule, SmoothCharacter};
use parind_core::{FpMatrix, Modulus};

const DEFAULT_P: u32 = 5;

#[derive(Parser)]
#[command(
    name = "parind",
    version,
    about = "Parabolic induction and its right adjoint for pro-p Iwahori-Hecke modules of SL2"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Induce a character of the torus algebra.
    Induce {
        #[arg(long, env = "HECKE_P")]
        p: Option<u32>,
        #[arg(long)]
        u: u32,
        #[arg(long)]
        e: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Right adjoint of a module read from a file or built in.
    Radjoint {
        #[arg(long = "in", conflicts_with = "builtin", required_unless_present = "builtin")]
        input: Option<PathBuf>,
        /// chi_sign, chi_triv, or supersingular followed by a0,a1,e
        #[arg(long, num_args = 1..=2, value_names = ["NAME", "PARAMS"])]
        builtin: Option<Vec<String>>,
        #[arg(long, env = "HECKE_P")]
        p: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dimensions of Ext groups between trivial-T1 representations.
    Ext {
        #[arg(long, value_enum)]
        cat: Category,
        #[arg(long, conflicts_with = "all_n", required_unless_present = "all_n")]
        n: Option<u32>,
        #[arg(long)]
        all_n: bool,
        /// `u,e[^chain][*mult]` blocks joined by `+`, or a .json file
        #[arg(long, allow_hyphen_values = true)]
        source: String,
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long, env = "HECKE_P")]
        p: Option<u32>,
    },
    /// Check the tables of derived right adjoints.
    Verify {
        #[arg(long, value_enum)]
        class: ClassArg,
        #[arg(long, env = "HECKE_P")]
        p: Option<u32>,
        #[arg(long, allow_hyphen_values = true)]
        chi: Option<String>,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        inject_fault: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Category {
    Ht,
    T,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Principal,
    Steinberg,
    Trivial,
    Supersingular,
    All,
}

enum Failure {
    Usage(String),
    InvalidModule(String),
    Verification,
}

impl From<parind_core::Error> for Failure {
    fn from(e: parind_core::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CliResult = Result<(), Failure>;

fn modulus(p: Option<u32>) -> Result<Modulus, Failure> {
    Modulus::new(p.unwrap_or(DEFAULT_P)).map_err(|e| Failure::Usage(e.to_string()))
}

fn write_output(out: Option<&Path>, text: &str) -> CliResult {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn cmd_induce(p: Option<u32>, u: u32, e: u32, out: Option<PathBuf>) -> CliResult {
    let m = modulus(p)?;
    if u == 0 || u >= m.get() {
        return Err(Failure::Usage(format!("u must satisfy 1 <= u < {m}")));
    }
    if e >= m.unit_order() {
        return Err(Failure::Usage(format!("e must satisfy 0 <= e < {}", m.unit_order())));
    }
    let chi = SmoothCharacter::new(m, u as i64, e as i64)?;
    let module = induce(&chi.to_module())?;
    let bad = module.verify_relations();
    eprintln!("dim {}", module.dim());
    eprintln!(
        "relations {}",
        if bad.is_empty() {
            "ok".to_string()
        } else {
            format!("{bad:?}")
        }
    );
    write_output(out.as_deref(), &(module.to_json() + "\n"))
}

fn builtin_module(spec: &[String], m: Modulus) -> Result<HModule, Failure> {
    // `--builtin "supersingular -1,0,0"` keeps a leading minus away from the flag parser.
    let words: Vec<&str> = spec.iter().flat_map(|s| s.split_whitespace()).collect();
    if words.len() > 2 {
        return Err(Failure::Usage(format!("unknown builtin '{}'", words.join(" "))));
    }
    let kind = match (words.first().copied().unwrap_or(""), words.get(1)) {
        ("chi_sign", None) => HCharacterKind::Sign,
        ("chi_triv", None) => HCharacterKind::Trivial,
        ("supersingular", Some(params)) => {
            let vals: Vec<i64> = params
                .split(',')
                .map(|v| v.trim().parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(|_| Failure::Usage(format!("supersingular parameters must be a0,a1,e; got '{params}'")))?;
            let [a0, a1, e] = vals[..] else {
                return Err(Failure::Usage(format!(
                    "supersingular parameters must be a0,a1,e; got '{params}'"
                )));
            };
            let e = e.rem_euclid(m.unit_order() as i64) as u32;
            HCharacterKind::Supersingular { a0, a1, e }
        }
        _ => return Err(Failure::Usage(format!("unknown builtin '{}'", words.join(" ")))),
    };
    // unvalidated; relations are checked by the caller
    let (s0, s1, g) = kind.raw_values(m);
    let one = |v: i64| FpMatrix::new(m, 1, 1, &[v]);
    Ok(HModule::new_unchecked(one(s0)?, one(s1)?, one(g)?)?)
}

fn cmd_radjoint(
    input: Option<PathBuf>,
    builtin: Option<Vec<String>>,
    p: Option<u32>,
    out: Option<PathBuf>,
) -> CliResult {
    let module = match (input, builtin) {
        (Some(path), _) => HModule::from_json(&read_file(&path)?).map_err(|e| Failure::InvalidModule(e.to_string()))?,
        (None, Some(spec)) => builtin_module(&spec, modulus(p)?)?,
        (None, None) => return Err(Failure::Usage("one of --in or --builtin is required".into())),
    };
    let bad = module.verify_relations();
    if !bad.is_empty() {
        let list: Vec<String> = bad.iter().map(ToString::to_string).collect();
        return Err(Failure::InvalidModule(format!(
            "relations violated: {}",
            list.join(", ")
        )));
    }
    let r = right_adjoint(&module)?;
    eprintln!("dim {}", r.dim());
    if let Some(chi) = r.as_character() {
        eprintln!("character u={} e={}", chi.u(), chi.e());
    }
    write_output(out.as_deref(), &(r.to_json() + "\n"))
}

fn multiset_from_rows(m: Modulus, text: &str) -> Result<CharMultiset, Failure> {
    let rows: Vec<[u32; 4]> = serde_json::from_str(text).map_err(|e| Failure::Usage(e.to_string()))?;
    let entries = rows
        .iter()
        .map(|&[u, e, mult, chain]| {
            Ok(CharEntry {
                character: SmoothCharacter::new(m, u as i64, e as i64)?,
                multiplicity: mult as usize,
                chain: chain as usize,
            })
        })
        .collect::<parind_core::Result<Vec<_>>>()?;
    Ok(CharMultiset::new(m, entries)?)
}

enum Operand {
    Chars(CharMultiset),
    Module(HTModule),
}

fn parse_operand(spec: &str, m: Modulus, cat: Category) -> Result<Operand, Failure> {
    if !spec.ends_with(".json") {
        return Ok(Operand::Chars(CharMultiset::parse(m, spec)?));
    }
    let text = read_file(Path::new(spec))?;
    match cat {
        Category::Ht => {
            let module = HTModule::from_json(&text)?;
            let bad = module.violations()?;
            if !bad.is_empty() {
                return Err(Failure::InvalidModule(bad.join(", ")));
            }
            Ok(Operand::Module(module))
        }
        Category::T => multiset_from_rows(m, &text).map(Operand::Chars),
    }
}

fn cmd_ext(cat: Category, n: Option<u32>, all_n: bool, source: &str, target: &str, p: Option<u32>) -> CliResult {
    let m = modulus(p)?;
    let a = parse_operand(source, m, cat)?;
    let b = parse_operand(target, m, cat)?;
    let text = match cat {
        Category::Ht => {
            let as_module = |o: Operand| match o {
                Operand::Chars(c) => c.to_module(),
                Operand::Module(h) => h,
            };
            let (a, b) = (as_module(a), as_module(b));
            if all_n {
                ext_ht_table(&a, &b)?.to_json()
            } else {
                ext_ht(n.unwrap_or(0), &a, &b)?.to_string()
            }
        }
        Category::T => {
            let (Operand::Chars(a), Operand::Chars(b)) = (a, b) else {
                unreachable!("T operands are always multisets")
            };
            if all_n {
                ext_t_table(&a, &b)?.to_json()
            } else {
                ext_t(n.unwrap_or(0), &a, &b)?.to_string()
            }
        }
    };
    write_output(None, &(text + "\n"))
}

fn summary(bundle: &ReportBundle) -> String {
    let mut out = String::new();
    let label = |r: &VerificationReport| match r.chi {
        Some([u, e]) => format!("{}({u},{e})", r.class),
        None => r.class.clone(),
    };
    let width = bundle.reports.iter().map(|r| label(r).len()).max().unwrap_or(0);
    for r in &bundle.reports {
        let failed = r.constraints.iter().filter(|c| !c.pass).count();
        out += &format!(
            "{:<width$}  {:>4}  rows {:>3}  failed {:>3}",
            label(r),
            r.verdict,
            r.constraints.len(),
            failed
        );
        out.push('\n');
        for c in r.constraints.iter().filter(|c| !c.pass) {
            out += &format!("    {}: {} vs {}\n", c.id, c.lhs, c.rhs);
        }
    }
    out += &format!("p = {}: {}\n", bundle.p, bundle.verdict);
    out
}

fn cmd_verify(
    class: ClassArg,
    p: Option<u32>,
    chi: Option<String>,
    json: Option<PathBuf>,
    inject_fault: bool,
) -> CliResult {
    let m = modulus(p)?;
    let chi = match chi {
        Some(text) => {
            let (u, e) = text
                .split_once(',')
                .and_then(|(u, e)| Some((u.trim().parse::<i64>().ok()?, e.trim().parse::<i64>().ok()?)))
                .ok_or_else(|| Failure::Usage(format!("--chi expects u,e; got '{text}'")))?;
            Some(SmoothCharacter::new(m, u, e)?)
        }
        None => None,
    };
    if chi.is_some() && !matches!(class, ClassArg::Principal) {
        return Err(Failure::Usage("--chi only applies to --class principal".into()));
    }
    let selection = match class {
        ClassArg::Principal => Selection::Principal(chi),
        ClassArg::Steinberg => Selection::Steinberg,
        ClassArg::Trivial => Selection::Trivial,
        ClassArg::Supersingular => Selection::Supersingular,
        ClassArg::All => Selection::All,
    };
    let fault = if inject_fault {
        Fault::ExtraTrivialInDegreeZero
    } else {
        Fault::None
    };
    let bundle = ReportBundle::new(m, verify_all(m, selection, fault)?);
    write_output(None, &summary(&bundle))?;
    if let Some(path) = json {
        write_output(Some(&path), &bundle.to_json())?;
    }
    if bundle.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Induce { p, u, e, out } => cmd_induce(p, u, e, out),
        Command::Radjoint { input, builtin, p, out } => cmd_radjoint(input, builtin, p, out),
        Command::Ext {
            cat,
            n,
            all_n,
            source,
            target,
            p,
        } => cmd_ext(cat, n, all_n, &source, &target, p),
        Command::Verify {
            class,
            p,
            chi,
            json,
            inject_fault,
        } => cmd_verify(class, p, chi, json, inject_fault),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::InvalidModule(msg)) => {
            eprintln!("invalid module: {msg}");
            ExitCode::from(3)
        }
    }
}
