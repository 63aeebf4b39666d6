//! `perfchar` subcommands.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Map, Value};

use super::{classify_curve, invariant_table, to_markdown, Cited, Coherence, Embedding, SCHEMA};
use crate::error::{Error, Result};
use crate::hilbert_kunz::{e_hk_estimate, hk_sequence, seibert_fit};
use crate::homology::{cech_grade, ext_grade, koszul_grade, tor, vanish_check, GradeResult, CECH_WINDOW};
use crate::ideal::{colimit_membership, ColimitIdeal, ColimitSearch};
use crate::perfpoly::PerfPoly;
use crate::ring::{LevelRing, RelationMode, RingPresentation};
use crate::valuation::{build_chain, ext1_chain_recovery, perfect_valuation};
use crate::field::PrimeChar;
use crate::witt::{
    fp_tilt_table, integer_image, integer_table_check, witt_add, witt_mod_p_check, witt_mul, PerfectRing,
    TiltRing, WittVector,
};

#[derive(Parser, Debug)]
#[command(name = "perfchar", version, about = "Exact computer algebra in prime characteristic")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Cap on S-pair reductions per Groebner basis.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Perfection,
    Literal,
}

impl From<Mode> for RelationMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Perfection => RelationMode::Perfection,
            Mode::Literal => RelationMode::Literal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Koszul,
    Cech,
    Ext,
    All,
}

#[derive(Args, Debug)]
struct RingArgs {
    /// Ring presentation file `{"char": p, "vars": [...], "relations": [...]}`.
    #[arg(long)]
    ring: PathBuf,
    /// How relations are read at positive levels.
    #[arg(long, value_enum, default_value_t = Mode::Perfection)]
    mode: Mode,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hilbert-Kunz colength sequence and multiplicity.
    Hk {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        ideal: String,
        #[arg(long, default_value_t = 4)]
        max_level: u32,
        /// Exponent `d` in `l_n / q^d`; defaults to the Krull dimension.
        #[arg(long)]
        dim: Option<usize>,
        /// Also fit `l_n = sum b_i p^{in}`.
        #[arg(long)]
        fit_seibert: bool,
    },
    /// Koszul, Cech and Ext grade of a sequence on `ring / module`.
    Grade {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, default_value_t = 0)]
        level: u32,
        #[arg(long)]
        seq: String,
        /// Ideal `J` with module `ring/J`.
        #[arg(long, default_value = "")]
        module: String,
        #[arg(long, value_enum, default_value_t = Method::All)]
        method: Method,
        #[arg(long, default_value_t = CECH_WINDOW)]
        window: u32,
    },
    /// Search for an element in a colimit ideal `(roots)^perf`.
    ResolveColimit {
        #[command(flatten)]
        ring: RingArgs,
        /// Roots `a` of the colimit ideal generated by all `a^{1/p^m}`.
        #[arg(long)]
        ideal: String,
        /// Second colimit ideal; the search then runs in the product.
        #[arg(long)]
        times: Option<String>,
        #[arg(long)]
        element: String,
        #[arg(long)]
        max_level: Option<u32>,
    },
    /// `Tor_i(ring/I, ring/J)` at a level.
    Tor {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        index: usize,
        #[arg(long, default_value_t = 0)]
        level: u32,
    },
    /// Sample `I_n cap J_n` and find each sample in the colimit product.
    VanishCheck {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long, default_value_t = 12)]
        samples: usize,
        #[arg(long, default_value_t = 4)]
        slack: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Witt vector arithmetic.
    Witt {
        #[arg(long)]
        char: u64,
        #[arg(long)]
        length: usize,
        /// Coefficient ring; defaults to F_p.
        #[arg(long)]
        ring: Option<PathBuf>,
        /// Exhaustive `W_n(F_p) = Z/p^n` table check.
        #[arg(long, conflicts_with_all = ["add", "mul", "mod_p"])]
        table: bool,
        #[arg(long, num_args = 2, value_names = ["A", "B"], conflicts_with = "mul")]
        add: Option<Vec<String>>,
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        mul: Option<Vec<String>>,
        /// Sampled `W_n(R)/p = R` check with this many samples.
        #[arg(long)]
        mod_p: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Truncated tilt: lift an element, or tabulate the tilt of `Z/p^L`.
    Tilt {
        /// Residue ring `A/pA`.
        #[arg(long, required_unless_present = "char")]
        ring: Option<PathBuf>,
        /// Use `Z/p^L` (residue ring `F_p`).
        #[arg(long, conflicts_with = "ring")]
        char: Option<u64>,
        #[arg(long)]
        length: usize,
        #[arg(long)]
        witness: Option<String>,
        #[arg(long, value_enum, default_value_t = Mode::Perfection)]
        mode: Mode,
    },
    /// Valuation of a one-variable element of `F_p[x]^perf`.
    Valuation {
        #[arg(long)]
        char: u64,
        #[arg(long)]
        element: String,
        #[arg(long, default_value = "x")]
        var: String,
    },
    /// Kernel recovery along `a_k = x^{(p-1)/p^k} a_{k+1}` built from `a_N`.
    Ext1Check {
        #[arg(long)]
        char: u64,
        #[arg(long)]
        length: usize,
        /// `a_N`.
        #[arg(long)]
        seed: String,
        #[arg(long, default_value = "x")]
        var: String,
    },
    /// F-coherence of a curve from its normalization.
    Classify {
        #[arg(long)]
        ring: PathBuf,
        #[arg(long)]
        normalization: PathBuf,
        /// `{"images": {"t": "t", "ts": "t*s"}}`.
        #[arg(long)]
        embedding: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_level: u32,
    },
    /// Homological invariants of the perfection.
    Invariants {
        #[arg(long)]
        ring: PathBuf,
    },
}

/// A finished report and whether it settles the question asked.
struct Outcome {
    report: Value,
    decided: bool,
}

impl Outcome {
    fn done(v: impl Serialize) -> Result<Self> {
        Ok(Outcome {
            report: serde_json::to_value(v)?,
            decided: true,
        })
    }

    fn undecided_if(mut self, open: bool) -> Self {
        self.decided = !open;
        self
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn read_ring(path: &Path) -> Result<RingPresentation> {
    RingPresentation::from_json(&read(path)?)
}

fn level_ring(args: &RingArgs, level: u32, budget: Option<u64>) -> Result<LevelRing> {
    let mut r = read_ring(&args.ring)?.level(level).with_mode(args.mode.into());
    if let Some(b) = budget {
        r = r.with_budget(b);
    }
    Ok(r)
}

fn strings(v: &[PerfPoly]) -> Vec<String> {
    v.iter().map(|f| f.to_string()).collect()
}

fn grade_json(g: &GradeResult) -> Value {
    json!({
        "method": g.method,
        "value": g.display_value(),
        "window": g.window,
        "lower_bound": g.lower_bound,
    })
}

fn one_var(p: u64, var: &str) -> Result<RingPresentation> {
    RingPresentation::polynomial_ring(p, &[var])
}

fn execute(cmd: Command, budget: Option<u64>) -> Result<Outcome> {
    match cmd {
        Command::Hk {
            ring,
            ideal,
            max_level,
            dim,
            fit_seibert,
        } => {
            let r = level_ring(&ring, 0, budget)?;
            let i = r.parse_ideal(&ideal)?;
            let rec = hk_sequence(&i, max_level, dim)?;
            let est = e_hk_estimate(&rec)?;
            let mut v = serde_json::to_value(&rec)?;
            v["e_hk"] = serde_json::to_value(&est)?;
            // polynomial rings are regular, hence F-coherent
            v["rationality"] = if r.base().relations().is_empty() {
                serde_json::to_value(Cited::text("asserted", "hk-rational"))?
            } else {
                "not covered by a cited theorem".into()
            };
            if fit_seibert {
                let pts: Vec<(u32, BigInt)> = rec.rows.iter().map(|row| (row.n, BigInt::from(row.colength.clone()))).collect();
                v["seibert"] = serde_json::to_value(seibert_fit(&pts, r.char(), rec.d)?)?;
            }
            Ok(Outcome {
                report: v,
                decided: true,
            }
            .undecided_if(est.e_hk().is_none()))
        }
        Command::Grade {
            ring,
            level,
            seq,
            module,
            method,
            window,
        } => {
            let r = level_ring(&ring, level, budget)?;
            let seq = r.base().parse_elements(&seq)?;
            let m = r.parse_ideal(&module)?;
            let mut results = Vec::new();
            if matches!(method, Method::Koszul | Method::All) {
                results.push(koszul_grade(&seq, &m)?);
            }
            if matches!(method, Method::Cech | Method::All) {
                results.push(cech_grade(&seq, &m, window)?);
            }
            if matches!(method, Method::Ext | Method::All) {
                let i = r.ideal(seq.clone())?;
                results.push(ext_grade(&i, &m)?);
            }
            let agree = results.windows(2).all(|w| w[0].value == w[1].value);
            Outcome::done(json!({
                "ring": r.base().to_string(),
                "level": level,
                "sequence": strings(&seq),
                "module_ideal": strings(m.generators()),
                "grades": results.iter().map(grade_json).collect::<Vec<_>>(),
                "consistent": agree,
            }))
        }
        Command::ResolveColimit {
            ring,
            ideal,
            times,
            element,
            max_level,
        } => {
            let base = read_ring(&ring.ring)?;
            let c = ColimitIdeal::parse(&base, &ideal)?;
            let other = times.map(|t| ColimitIdeal::parse(&base, &t)).transpose()?;
            let f = base.parse_element(&element)?;
            let res = colimit_membership(&f, &c, other.as_ref(), max_level)?;
            let found = res.is_found();
            let body = match &res {
                ColimitSearch::Found {
                    level,
                    generators,
                    certificate,
                } => json!({
                    "found": true,
                    "level": level,
                    "generators": strings(generators),
                    "certificate": strings(certificate),
                }),
                ColimitSearch::Inconclusive { max_level } => json!({
                    "found": false,
                    "inconclusive": true,
                    "max_level": max_level,
                }),
            };
            let mut v = json!({"ring": base.to_string(), "element": f.to_string()});
            merge(&mut v, body);
            Ok(Outcome {
                report: v,
                decided: found,
            })
        }
        Command::Tor {
            ring,
            left,
            right,
            index,
            level,
        } => {
            let r = level_ring(&ring, level, budget)?;
            let t = tor(&r.parse_ideal(&left)?, &r.parse_ideal(&right)?, index)?;
            let mut v = json!({"ring": r.base().to_string()});
            merge(&mut v, serde_json::to_value(&t)?);
            Outcome::done(v)
        }
        Command::VanishCheck {
            ring,
            left,
            right,
            samples,
            slack,
            seed,
        } => {
            let base = read_ring(&ring.ring)?;
            let i = ColimitIdeal::parse(&base, &left)?;
            let j = ColimitIdeal::parse(&base, &right)?;
            let rep = vanish_check(&i, &j, samples, slack, seed)?;
            let all = rep.all_found();
            let mut v = json!({"ring": base.to_string(), "seed": seed});
            merge(&mut v, serde_json::to_value(&rep)?);
            Ok(Outcome {
                report: v,
                decided: all,
            })
        }
        Command::Witt {
            char,
            length,
            ring,
            table,
            add,
            mul,
            mod_p,
            seed,
        } => witt_command(char, length, ring, table, add, mul, mod_p, seed),
        Command::Tilt {
            ring,
            char,
            length,
            witness,
            mode,
        } => {
            if let Some(p) = char {
                let t = fp_tilt_table(p, length)?;
                let passed = t.passed();
                let mut v = serde_json::to_value(&t)?;
                v["passed"] = passed.into();
                if let Some(w) = witness {
                    let tr = TiltRing::integers_mod(p, length)?;
                    let f = tr.residue().parse_element(&w)?;
                    v["lift"] = strings(tr.lift(&f)?.coords()).into();
                }
                return Outcome::done(v);
            }
            let residue = read_ring(ring.as_deref().expect("clap enforces --ring"))?;
            let tr = TiltRing::new(residue.clone(), mode.into(), length)?;
            let mut v = json!({
                "ring": residue.to_string(),
                "length": length,
                "perfect": tr.is_perfect(),
            });
            if let Some(w) = witness {
                let f = residue.parse_element(&w)?;
                let e = tr.lift(&f)?;
                v["lift"] = strings(e.coords()).into();
                v["projection"] = tr.project(&e).to_string().into();
                v["all_coords_nonzero"] = tr.all_coords_nonzero(&e)?.into();
            }
            Outcome::done(v)
        }
        Command::Valuation { char, element, var } => {
            let r = one_var(char, &var)?;
            let f = r.parse_element(&element)?;
            let v = perfect_valuation(&f, None)?;
            Outcome::done(json!({
                "p": char,
                "element": f.to_string(),
                "valuation": v.text(PrimeChar::new(char)?),
            }))
        }
        Command::Ext1Check { char, length, seed, var } => {
            if length == 0 {
                return Err(Error::Invalid("--length must be positive".into()));
            }
            let r = one_var(char, &var)?;
            let a_n = r.parse_element(&seed)?;
            let x = r.var(&var)?;
            let chain = build_chain(&a_n, &x, length);
            let rep = ext1_chain_recovery(&chain, &x)?;
            let mut v = json!({"chain": strings(&chain)});
            merge(&mut v, serde_json::to_value(&rep)?);
            Outcome::done(v)
        }
        Command::Classify {
            ring,
            normalization,
            embedding,
            max_level,
        } => {
            let r = read_ring(&ring)?;
            let n = read_ring(&normalization)?;
            let e = Embedding::from_json(&read(&embedding)?, &r, &n)?;
            let rep = classify_curve(&r, &n, &e, max_level)?;
            let open = matches!(rep.coherence, Coherence::Inconclusive { .. });
            Ok(Outcome::done(rep)?.undecided_if(open))
        }
        Command::Invariants { ring } => Outcome::done(invariant_table(&read_ring(&ring)?)?),
    }
}

#[allow(clippy::too_many_arguments)]
fn witt_command(
    p: u64,
    length: usize,
    ring: Option<PathBuf>,
    table: bool,
    add: Option<Vec<String>>,
    mul: Option<Vec<String>>,
    mod_p: Option<usize>,
    seed: u64,
) -> Result<Outcome> {
    if length == 0 {
        return Err(Error::Invalid("--length must be positive".into()));
    }
    if table {
        let t = integer_table_check(p, length)?;
        let mut v = serde_json::to_value(&t)?;
        v["passed"] = t.passed().into();
        return Outcome::done(v);
    }
    let base = match &ring {
        Some(path) => {
            let r = read_ring(path)?;
            if r.char().get() != p {
                return Err(Error::CharMismatch(r.char().get(), p));
            }
            PerfectRing::new(r, RelationMode::Perfection)?
        }
        None => PerfectRing::prime_field(p)?,
    };
    let is_prime_field = base.base().vars().is_empty();
    let pr = Arc::new(base);
    if let Some(samples) = mod_p {
        let rep = witt_mod_p_check(pr, length, samples, seed)?;
        let mut v = serde_json::to_value(&rep)?;
        v["passed"] = rep.passed().into();
        return Outcome::done(v);
    }
    let (op, args) = match (add, mul) {
        (Some(a), None) => ("add", a),
        (None, Some(m)) => ("mul", m),
        _ => return Err(Error::Invalid("pass one of --table, --add, --mul, --mod-p".into())),
    };
    let a = padded(WittVector::parse(pr.clone(), &args[0])?, length)?;
    let b = padded(WittVector::parse(pr.clone(), &args[1])?, length)?;
    let c = if op == "add" { witt_add(&a, &b)? } else { witt_mul(&a, &b)? };
    let mut v = json!({
        "p": p,
        "length": length,
        "op": op,
        "a": strings(a.coords()),
        "b": strings(b.coords()),
        "result": strings(c.coords()),
    });
    if is_prime_field {
        let pc = PrimeChar::new(p)?;
        let digits = |w: &WittVector| -> Vec<u64> { w.coords().iter().map(|x| x.constant_term()).collect() };
        v["integer_images"] = json!({
            "a": integer_image(&digits(&a), pc).to_string(),
            "b": integer_image(&digits(&b), pc).to_string(),
            "result": integer_image(&digits(&c), pc).to_string(),
        });
    }
    Outcome::done(v)
}

fn padded(w: WittVector, length: usize) -> Result<WittVector> {
    let mut coords = w.coords().to_vec();
    if coords.len() > length {
        return Err(Error::Invalid(format!("more than {length} Witt coordinates")));
    }
    coords.resize(length, w.ring().zero());
    WittVector::new(w.ring().clone(), coords)
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        a.extend(b);
    }
}

fn envelope(command: &str, report: Value) -> Value {
    let mut m = Map::new();
    m.insert("schema".into(), SCHEMA.into());
    m.insert("command".into(), command.into());
    match report {
        Value::Object(o) => m.extend(o),
        other => {
            m.insert("result".into(), other);
        }
    }
    Value::Object(m)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Hk { .. } => "hk",
        Command::Grade { .. } => "grade",
        Command::ResolveColimit { .. } => "resolve-colimit",
        Command::Tor { .. } => "tor",
        Command::VanishCheck { .. } => "vanish-check",
        Command::Witt { .. } => "witt",
        Command::Tilt { .. } => "tilt",
        Command::Valuation { .. } => "valuation",
        Command::Ext1Check { .. } => "ext1-check",
        Command::Classify { .. } => "classify",
        Command::Invariants { .. } => "invariants",
    }
}

/// Parse `argv` (including the program name), run, and return the exit code:
/// 0 on success, 1 on user error, 2 when a budget is exceeded or the answer
/// is inconclusive.
pub fn run_cli<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let name = command_name(&cli.command);
    let (report, code) = match execute(cli.command, cli.budget) {
        Ok(o) => {
            let code = if o.decided { 0 } else { 2 };
            if code == 2 {
                let _ = writeln!(err, "perfchar {name}: inconclusive");
            }
            (envelope(name, o.report), code)
        }
        Err(e) => {
            let _ = writeln!(err, "perfchar {name}: {e}");
            return match e {
                Error::ResourceExceeded(_) => 2,
                _ => 1,
            };
        }
    };
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("json values serialize") + "\n",
        Format::Md => to_markdown(&report),
    };
    if out.write_all(text.as_bytes()).is_err() {
        return 1;
    }
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["perfchar"];
        argv.extend_from_slice(args);
        let code = run_cli(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn unknown_subcommand_is_user_error() {
        let (code, out, err) = run(&["frobnicate"]);
        assert_eq!(code, 1);
        assert!(out.is_empty());
        assert!(!err.is_empty());
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(run(&["--help"]).0, 0);
    }

    #[test]
    fn valuation_report() {
        let (code, out, _) = run(&["valuation", "--char", "2", "--element", "x^(3/4)+x"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["valuation"], "3/4");
    }

    #[test]
    fn witt_add_over_fp() {
        let (code, out, _) = run(&["witt", "--char", "2", "--length", "2", "--add", "1,0", "1,0"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["result"], json!(["0", "1"]));
        assert_eq!(v["integer_images"]["result"], "2");
    }

    #[test]
    fn missing_file_is_user_error() {
        assert_eq!(run(&["invariants", "--ring", "/nonexistent/ring.json"]).0, 1);
    }
}
