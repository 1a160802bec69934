use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qpair::check::check_document;
use qpair::classify::{canonical_filtration, classify_with, report, FORMAT_VERSION};
use qpair::error::{Error, Result};
use qpair::exact::{GaussianRational, Quaternion, Rational};
use qpair::pairs::{gen_u, gen_v, gen_w, random_automorphism, sphere_point_from_zeta, Pair, Rotation, Zeta};
use qpair::pencil::{startup_check, Convention};
use qpair::selftest::run_all;

const DEFAULT_MAX_K: usize = 16;

#[derive(Parser)]
#[command(name = "qpair", version, about = "Exact classification of real subspaces of quaternionic vector spaces")]
struct Cli {
    /// Build pencils from sign-flipped eigensections (negative-control fixture).
    #[arg(long, global = true, hide = true)]
    sign_flipped_fixture: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a pair and print its report.
    Classify {
        file: PathBuf,
        /// Emit the full JSON report instead of a summary.
        #[arg(long)]
        json: bool,
        /// Include the canonical filtration.
        #[arg(long)]
        filtration: bool,
        #[arg(long)]
        pretty: bool,
    },
    /// Write a model pair.
    Generate {
        #[arg(long = "type", value_enum)]
        kind: ModelType,
        #[arg(long)]
        k: usize,
        /// Support point ζ for W: `inf`, a rational, or `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        support: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the dual pair.
    Dual {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the product of two or more pairs; every factor after the first
    /// is multiplied by the inverse of the rotation.
    Product {
        #[arg(required = true, num_args = 2..)]
        files: Vec<PathBuf>,
        /// Unit quaternion `r,i,j,k` with rational components.
        #[arg(long, allow_hyphen_values = true)]
        rotation: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply the seeded random automorphism.
    Transform {
        file: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every consistency check on a pair, signature or report.
    Check {
        file: PathBuf,
        #[arg(long)]
        pretty: bool,
    },
    /// Run the acceptance suite.
    Selftest {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelType {
    #[value(name = "U")]
    U,
    #[value(name = "Ustar", alias = "U*")]
    Ustar,
    #[value(name = "V")]
    V,
    #[value(name = "Vstar", alias = "V*")]
    Vstar,
    #[value(name = "W")]
    W,
}

fn max_k() -> Result<usize> {
    match std::env::var("QPAIR_MAX_K") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("QPAIR_MAX_K must be a nonnegative integer, got {s:?}"))),
        Err(_) => Ok(DEFAULT_MAX_K),
    }
}

fn check_size(p: &Pair) -> Result<()> {
    let cap = max_k()?;
    if p.k() > cap {
        return Err(Error::DimensionOverflow(format!("k = {} exceeds QPAIR_MAX_K = {cap}", p.k())));
    }
    Ok(())
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::invalid(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<Value> {
    serde_json::from_str(&read_text(path)?).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn read_pair(path: &Path) -> Result<Pair> {
    let text = read_text(path)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    if let Some(version) = v.get("format_version") {
        if version != &json!(FORMAT_VERSION) {
            return Err(Error::Parse(format!("{}: unsupported format_version {version}", path.display())));
        }
    }
    // Deserialize from the text, not the value, so errors carry a position.
    let p: Pair = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    check_size(&p)?;
    Ok(p)
}

fn pair_document(p: &Pair) -> Value {
    let mut v = serde_json::to_value(p).expect("pairs serialize");
    v["format_version"] = json!(FORMAT_VERSION);
    v
}

fn render(v: &Value, pretty: bool) -> String {
    let mut s =
        if pretty { serde_json::to_string_pretty(v) } else { serde_json::to_string(v) }.expect("values serialize");
    s.push('\n');
    s
}

fn emit(v: &Value, out: Option<&Path>) -> Result<()> {
    let text = render(v, true);
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Error::invalid(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_rational(s: &str) -> Result<Rational> {
    s.trim().parse().map_err(|e| Error::Parse(format!("{s:?}: {e}")))
}

fn parse_zeta(s: &str) -> Result<Zeta> {
    let s = s.trim();
    if matches!(s, "inf" | "∞" | "infinity") {
        return Ok(Zeta::Infinity);
    }
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [re] => Ok(Zeta::Finite(GaussianRational::new(parse_rational(re)?, Rational::zero()))),
        [re, im] => Ok(Zeta::Finite(GaussianRational::new(parse_rational(re)?, parse_rational(im)?))),
        _ => Err(Error::Parse(format!("support {s:?}: expected `inf`, `re` or `re,im`"))),
    }
}

fn parse_rotation(s: &str) -> Result<Rotation> {
    let parts = s.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
    let [r, i, j, k]: [Rational; 4] =
        parts.try_into().map_err(|_| Error::Parse(format!("rotation {s:?}: expected four rationals r,i,j,k")))?;
    Rotation::new(Quaternion::new(r, i, j, k))
}

fn generate(kind: ModelType, k: usize, support: Option<&str>) -> Result<Pair> {
    if support.is_some() && !matches!(kind, ModelType::W) {
        return Err(Error::invalid("--support only applies to --type W"));
    }
    let p = match kind {
        ModelType::U => gen_u(k, None)?,
        ModelType::Ustar => gen_u(k, None)?.dual(),
        ModelType::V => gen_v(k),
        ModelType::Vstar => gen_v(k).dual(),
        ModelType::W => {
            let zeta = parse_zeta(support.ok_or_else(|| Error::invalid("--type W requires --support"))?)?;
            gen_w(k, &sphere_point_from_zeta(&zeta))?
        }
    };
    check_size(&p)?;
    Ok(p)
}

fn summary(c: &qpair::classify::Classification) -> String {
    let mut s = format!("pair of real dimension {} in H^{}\n", c.pair.dim(), c.pair.k());
    s.push_str(&format!("factors: {}\n", c.factors));
    s.push_str(&format!("kernel degrees: {:?}\n", c.sheaf.kernel_degrees));
    s.push_str(&format!("cokernel degrees: {:?}\n", c.sheaf.cokernel_degrees));
    for t in &c.sheaf.torsion {
        s.push_str(&format!("torsion: support {} partition {:?}\n", t.support_form, t.partition));
    }
    s
}

fn run(cli: Cli) -> Result<i32> {
    let convention = if cli.sign_flipped_fixture { Convention::SignFlipped } else { Convention::Standard };
    startup_check(convention)?;
    match cli.command {
        Command::Classify { file, json, filtration, pretty } => {
            let p = read_pair(&file)?;
            let c = classify_with(&p, convention)?;
            let f = if filtration { Some(canonical_filtration(&c)?) } else { None };
            if json || pretty {
                print!("{}", render(&report(&c, f.as_ref(), true), pretty));
            } else {
                print!("{}", summary(&c));
                if let Some(f) = f {
                    println!("filtration dims: {}", serde_json::to_string(&f.dims()).expect("dims serialize"));
                }
            }
        }
        Command::Generate { kind, k, support, out } => {
            let p = generate(kind, k, support.as_deref())?;
            emit(&pair_document(&p), out.as_deref())?;
        }
        Command::Dual { file, out } => {
            let p = read_pair(&file)?;
            emit(&pair_document(&p.dual()), out.as_deref())?;
        }
        Command::Product { files, rotation, out } => {
            let rotation = match rotation {
                Some(s) => parse_rotation(&s)?,
                None => Rotation::identity(),
            };
            let pairs = files.iter().map(|f| read_pair(f)).collect::<Result<Vec<_>>>()?;
            let mut acc = pairs[0].clone();
            for p in &pairs[1..] {
                acc = acc.product(p, &rotation);
            }
            check_size(&acc)?;
            emit(&pair_document(&acc), out.as_deref())?;
        }
        Command::Transform { file, seed, out } => {
            let p = read_pair(&file)?;
            let phi = random_automorphism(p.k(), seed);
            emit(&pair_document(&p.act(&phi)?), out.as_deref())?;
        }
        Command::Check { file, pretty } => {
            let v = read_json(&file)?;
            if let Some(k) = v.get("quaternionic_dimension").and_then(Value::as_u64) {
                if k as usize > max_k()? {
                    return Err(Error::DimensionOverflow(format!("k = {k} exceeds QPAIR_MAX_K")));
                }
            }
            let mut out = check_document(&v)?;
            out["format_version"] = json!(FORMAT_VERSION);
            print!("{}", render(&out, pretty));
        }
        Command::Selftest { json } => {
            let results = run_all();
            let failed = results.iter().filter(|r| !r.passed).count();
            if json {
                let items: Vec<Value> = results
                    .iter()
                    .map(|r| json!({"criterion": r.id, "name": r.name, "passed": r.passed, "detail": r.detail}))
                    .collect();
                print!(
                    "{}",
                    render(&json!({"format_version": FORMAT_VERSION, "criteria": items, "failed": failed}), true)
                );
            } else {
                for r in &results {
                    println!("{}", r.line());
                }
                println!("{} of {} criteria passed", results.len() - failed, results.len());
            }
            if failed > 0 {
                return Ok(2);
            }
        }
    }
    Ok(0)
}

fn kind_name(e: &Error) -> &'static str {
    match e {
        Error::InvalidInput(_) => "invalid_input",
        Error::DependentBasis => "dependent_basis",
        Error::DimensionOverflow(_) => "dimension_overflow",
        Error::NotInvertible => "not_invertible",
        Error::Parse(_) => "parse",
        Error::Internal(_) => "internal",
        Error::Invariant(_) => "invariant",
    }
}

fn fail(kind: &str, message: String, code: u8) -> ExitCode {
    eprintln!("{}", json!({"error": {"kind": kind, "message": message}}));
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or_default();
            return fail("usage", first.trim_start_matches("error: ").to_string(), 1);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => fail(kind_name(&e), e.to_string(), if e.is_internal() { 2 } else { 1 }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_syntax() {
        assert_eq!(parse_zeta("inf").unwrap(), Zeta::Infinity);
        assert_eq!(parse_zeta("1").unwrap(), Zeta::int(1));
        assert_eq!(
            parse_zeta("1/2,1/2").unwrap(),
            Zeta::Finite(GaussianRational::new(Rational::new(1, 2), Rational::new(1, 2)))
        );
        assert!(parse_zeta("1,2,3").is_err());
        assert!(parse_zeta("1/0").is_err());
    }

    #[test]
    fn rotation_syntax() {
        assert!(parse_rotation("1/2,1/2,1/2,1/2").is_ok());
        assert!(parse_rotation("0,3/5,4/5,0").is_ok());
        assert!(parse_rotation("1,1,1,1").is_err());
        assert!(parse_rotation("1,0,0").is_err());
    }

    #[test]
    fn w_needs_support() {
        assert!(generate(ModelType::W, 1, None).is_err());
        assert!(generate(ModelType::U, 1, Some("1")).is_err());
        assert_eq!(generate(ModelType::V, 2, None).unwrap().dim(), 8);
    }
}
