use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use ggl::completion::{
    change_coordinate, classify, completed_fgl, default_flag, flag_expand, gamma, lambda_hat, n_series, n_series_matches,
    strict_iso_for_law, DEFAULT_DEPTH,
};
use ggl::error::GglError;
use ggl::euler::{check_euler_product, check_exact_sequence, check_k_regular, euler_class, psi, reassemble, split_decompose, RegularityReport};
use ggl::fgl::{FglJson, TruncatedFGL};
use ggl::fixed_points::{cyclic_fixed_points_mult, psi_kernel_check};
use ggl::groups::{format_char, is_split, parse_char, parse_chars, Character, GroupSpec};
use ggl::laws::{base_change, from_fgl, kan_value, law_from_name, value, Law, LawElement, ValueRing};
use ggl::lazard::{universal_relations, Mode};
use ggl::parse::parse_poly;
use ggl::ring::CoefficientRing;

/// Global equivariant group laws.
///
/// Variables in output: `t1..tr` are the torus coordinates of the
/// multiplicative law (`t` in rank one), `e1..er` the Euler classes of the
/// coordinate characters for the additive laws, and `x1..xr` the series
/// variables of laws built from a formal group law. A character `V` is
/// written as its integer coordinates `a1,...,ar`; its Euler class `e_V` is
/// `t1^a1...tr^ar - 1` for the multiplicative law and `a1*e1 + ... + ar*er`
/// for the additive law.
#[derive(Parser, Debug)]
#[command(name = "ggl", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// mult, add, 2tor-add or fgl:<path to TruncatedFGL JSON>
    #[arg(long, default_value = "mult", global = true)]
    law: String,
    /// Z, Q or F<p> (2tor-add defaults to F2, FGL files to their own ring)
    #[arg(long, global = true)]
    ring: Option<String>,
    /// T^r, C2^r, C<n>, 1 or T^r / [V1; V2; ...]
    #[arg(long, global = true)]
    group: Option<String>,
    /// emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    /// compare the output with the contents of this file
    #[arg(long, global = true)]
    fixture: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Euler class e_V
    Euler {
        #[arg(long = "char", allow_hyphen_values = true)]
        character: String,
    },
    /// psi_n, with the check e_n = prod_{m | n} psi_m
    Psi { n: u64 },
    /// exactness of 0 -> X(A) -e_V-> X(A) -> X(ker V) -> 0; sweeps all characters when --char is omitted
    ExactCheck {
        #[arg(long = "char", allow_hyphen_values = true)]
        character: Option<String>,
        #[arg(long, default_value_t = 2)]
        bound: u32,
        /// entry range of the sweep
        #[arg(long, default_value_t = 3)]
        range: i64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// regularity of the Euler classes of a tuple of characters
    RegularCheck {
        #[arg(long, allow_hyphen_values = true)]
        chars: String,
        #[arg(long, default_value_t = 2)]
        bound: u32,
    },
    /// x = sum p^*(x_i) e_V^i + r e_V^n along a split character
    Decompose {
        #[arg(long = "char", allow_hyphen_values = true)]
        character: String,
        #[arg(long, allow_hyphen_values = true)]
        element: String,
        #[arg(long, default_value_t = 3)]
        terms: usize,
    },
    /// expansion of an element of X(A x T) along a flag
    FlagExpand {
        #[arg(long, allow_hyphen_values = true)]
        element: String,
        #[arg(long, allow_hyphen_values = true)]
        flag: Option<String>,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
    },
    /// the completed A-equivariant formal group law
    Fgl {
        #[arg(long, allow_hyphen_values = true)]
        flag: Option<String>,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// [n]-series of the classified formal group law
    Nseries {
        #[arg(allow_hyphen_values = true)]
        n: i64,
        #[arg(long)]
        degree: Option<u32>,
    },
    /// y(epsilon) expanded along the constant flag (V, V, ...)
    Gamma {
        #[arg(long = "char", allow_hyphen_values = true)]
        character: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// strict coordinate change e' = lambda e
    ChangeCoord {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        degree: Option<u32>,
    },
    /// geometric fixed points of the multiplicative law at C<n>
    FixedPoints {
        #[arg(long, default_value_t = 3)]
        bound: i64,
    },
    /// value at a finite quotient group, by Kan extension
    Kan {
        #[arg(long, allow_hyphen_values = true)]
        element: Option<String>,
    },
    /// truncated Lazard relations and indecomposable ranks
    LazardRelations {
        #[arg(long, default_value_t = 6)]
        degree: u32,
        #[arg(long)]
        two_torsion: bool,
        /// list every relation
        #[arg(long)]
        verbose: bool,
    },
    /// formal group law of the completion at the trivial group, as TruncatedFGL JSON with --json
    Classify {
        #[arg(long)]
        degree: Option<u32>,
    },
}

struct Outcome {
    text: String,
    json: Value,
    failed: bool,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome { text, json, failed: false }
    }
}

type Res<T> = Result<T, GglError>;

fn load_law(c: &Common) -> Res<Law> {
    let ring: Option<CoefficientRing> = c.ring.as_deref().map(str::parse).transpose()?;
    if let Some(path) = c.law.strip_prefix("fgl:") {
        let txt = std::fs::read_to_string(path).map_err(|e| GglError::Parse(format!("{path}: {e}")))?;
        let j: FglJson = serde_json::from_str(&txt).map_err(|e| GglError::Parse(format!("{path}: {e}")))?;
        let law = from_fgl(TruncatedFGL::from_json(&j)?)?;
        return match ring {
            Some(k) if k != law.ring() => base_change(&law, k),
            _ => Ok(law),
        };
    }
    let default = if c.law == "2tor-add" { CoefficientRing::PrimeField(2) } else { CoefficientRing::Integers };
    law_from_name(&c.law, ring.unwrap_or(default))
}

fn load_group(c: &Common, law: &Law, fallback: &str) -> Res<GroupSpec> {
    match &c.group {
        Some(g) => Ok(g.parse()?),
        None => {
            if law.family() == ggl::groups::Family::Elem2 && fallback == "T" {
                Ok(GroupSpec::Elem2(1))
            } else {
                fallback.parse()
            }
        }
    }
}

fn element(v: &ValueRing, law: &Law, s: &str) -> Res<LawElement> {
    let p = parse_poly(s, law.ring(), &v.var_names())?;
    v.element(&**law, p)
}

fn elems(v: &ValueRing, xs: &[LawElement]) -> Vec<String> {
    xs.iter().map(|x| v.fmt_elem(x)).collect()
}

fn report_outcome(r: RegularityReport) -> Outcome {
    let mut text = format!("{}: {} at {} for [{}]", if r.passed() { "pass" } else { "fail" }, r.law, r.group, r.characters.join("; "));
    if let Some(w) = &r.witness {
        text.push_str(&format!("\nwitness: {w}"));
    }
    if !r.detail.is_empty() {
        text.push_str(&format!("\n{}", r.detail));
    }
    let failed = !r.passed();
    Outcome { text, json: serde_json::to_value(&r).unwrap(), failed }
}

fn sweep_chars(g: &GroupSpec, range: i64) -> Vec<Character> {
    let r = g.ambient_rank();
    let (lo, hi) = match g {
        GroupSpec::Elem2(_) => (0, 1),
        _ => (-range, range),
    };
    let mut out: Vec<Character> = vec![vec![]];
    for _ in 0..r {
        out = out.into_iter().flat_map(|v| (lo..=hi).map(move |a| v.iter().copied().chain([a]).collect())).collect();
    }
    out.retain(|v: &Character| v.iter().any(|&a| a != 0) && (matches!(g, GroupSpec::Elem2(_)) || is_split(v)));
    out
}

fn run(verb: &Verb, c: &Common) -> Res<Outcome> {
    let law = load_law(c)?;
    match verb {
        Verb::Euler { character } => {
            let g = load_group(c, &law, "T")?;
            let v = value(&*law, &g)?;
            let e = euler_class(&*law, &g, &parse_char(character)?)?;
            let s = v.fmt_elem(&e);
            Ok(Outcome::ok(s.clone(), json!({"law": law.id(), "group": g.to_string(), "character": character, "euler": s})))
        }
        Verb::Psi { n } => {
            let p = psi(&*law, *n)?;
            let v = value(&*law, &GroupSpec::Torus(1))?;
            let product = check_euler_product(&*law, *n)?;
            let s = v.fmt_elem(&p);
            Ok(Outcome { text: s.clone(), json: json!({"n": n, "psi": s, "euler_product": product}), failed: !product })
        }
        Verb::ExactCheck { character, bound, range, jobs } => {
            let g = load_group(c, &law, "T")?;
            if let Some(ch) = character {
                return Ok(report_outcome(check_exact_sequence(&*law, &g, &parse_char(ch)?, *bound)?));
            }
            let chars = sweep_chars(&g, *range);
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads((*jobs).max(1))
                .build()
                .map_err(|e| GglError::Unsupported(e.to_string()))?;
            let reports: Vec<Res<RegularityReport>> =
                pool.install(|| chars.par_iter().map(|v| check_exact_sequence(&*law, &g, v, *bound)).collect());
            let mut lines = Vec::new();
            let mut js = Vec::new();
            let mut failed = false;
            for r in reports {
                let r = r?;
                failed |= !r.passed();
                let mut line = format!("{} [{}]", if r.passed() { "pass" } else { "fail" }, r.characters.join("; "));
                if let Some(w) = &r.witness {
                    line.push_str(&format!(" witness {w}"));
                }
                lines.push(line);
                js.push(serde_json::to_value(&r).unwrap());
            }
            let pass = js.len() - lines.iter().filter(|l| l.starts_with("fail")).count();
            lines.push(format!("{pass}/{} characters pass at {}", js.len(), g));
            Ok(Outcome { text: lines.join("\n"), json: json!({"law": law.id(), "group": g.to_string(), "reports": js}), failed })
        }
        Verb::RegularCheck { chars, bound } => {
            let g = load_group(c, &law, "T")?;
            Ok(report_outcome(check_k_regular(&*law, &g, &parse_chars(chars)?, *bound)?))
        }
        Verb::Decompose { character, element: x, terms } => {
            let g = load_group(c, &law, "T")?;
            let v = value(&*law, &g)?;
            let ch = parse_char(character)?;
            let xe = element(&v, &law, x)?;
            let d = split_decompose(&*law, &g, &ch, &xe, *terms)?;
            let back = reassemble(&*law, &g, &ch, &d)?;
            let ok = v.equal(&*law, &back, &xe)?;
            let vk = value(&*law, &d.kernel)?;
            let coeffs = elems(&vk, &d.coeffs);
            let rem = v.fmt_elem(&d.remainder);
            let text = format!(
                "kernel: {}\ncoefficients: {}\nremainder: {}\nround trip: {}",
                d.kernel,
                coeffs.join(", "),
                rem,
                if ok { "ok" } else { "mismatch" }
            );
            Ok(Outcome {
                text,
                json: json!({"kernel": d.kernel.to_string(), "coeffs": coeffs, "remainder": rem, "round_trip": ok}),
                failed: !ok,
            })
        }
        Verb::FlagExpand { element: x, flag, depth } => {
            let g = load_group(c, &law, "1")?;
            let gt = g.times_circle()?;
            let vt = value(&*law, &gt)?;
            let xe = element(&vt, &law, x)?;
            let flag = match flag {
                Some(f) => parse_chars(f)?,
                None => default_flag(&g, *depth),
            };
            let e = flag_expand(&*law, &g, &flag, &xe)?;
            let va = value(&*law, &g)?;
            let text = e
                .flag
                .iter()
                .zip(&e.coeffs)
                .enumerate()
                .map(|(i, (f, a))| format!("a{i} [{}]: {}", format_char(f), va.fmt_elem(a)))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Outcome::ok(text, serde_json::to_value(e.to_json()).unwrap()))
        }
        Verb::Fgl { flag, depth } => {
            let g = load_group(c, &law, "1")?;
            let flag = flag.as_deref().map(parse_chars).transpose()?;
            let cf = completed_fgl(&*law, &g, *depth, flag.as_deref())?;
            let va = value(&*law, &g)?;
            let mut lines = vec![format!("ground: {}", cf.ground), format!("flag: [{}]", ggl::groups::format_chars(&cf.flag))];
            lines.push(format!("y(epsilon): {}", elems(&va, &cf.coordinate.coeffs).join(", ")));
            for (i, row) in cf.coproduct.iter().enumerate() {
                lines.push(format!("coproduct row {i}: {}", elems(&va, row).join(", ")));
            }
            for ((v, th), (_, e)) in cf.theta.iter().zip(&cf.euler) {
                lines.push(format!("theta([{}]): {}  e: {}", format_char(v), va.fmt_elem(th), va.fmt_elem(e)));
            }
            let js = json!({
                "ground": cf.ground,
                "flag": cf.flag,
                "coordinate": elems(&va, &cf.coordinate.coeffs),
                "coproduct": cf.coproduct.iter().map(|r| elems(&va, r)).collect::<Vec<_>>(),
                "theta": cf.theta.iter().map(|(v, x)| json!({"char": v, "value": va.fmt_elem(x)})).collect::<Vec<_>>(),
            });
            Ok(Outcome::ok(lines.join("\n"), js))
        }
        Verb::Nseries { n, degree } => {
            let f = classify(&*law, *degree)?;
            let s = n_series(&f, *n)?;
            let ok = n_series_matches(&*law, *n, *degree)?;
            let txt = s.fmt_with(&["x".to_string()]);
            Ok(Outcome {
                text: format!("{txt}\ne_{n} image: {}", if ok { "matches" } else { "differs" }),
                json: json!({"n": n, "series": txt, "matches_euler_class": ok}),
                failed: !ok,
            })
        }
        Verb::Gamma { character, depth } => {
            let g = load_group(c, &law, "T")?;
            let va = value(&*law, &g)?;
            let gf = gamma(&*law, &g, &parse_char(character)?, *depth)?;
            let lead = va.fmt_elem(&gf.leading);
            let gs = elems(&va, &gf.gamma);
            Ok(Outcome::ok(format!("leading: {lead}\ngamma: {}", gs.join(", ")), json!({"leading": lead, "gamma": gs})))
        }
        Verb::ChangeCoord { lambda, degree } => {
            let vt = value(&*law, &GroupSpec::Torus(1))?;
            let l = element(&vt, &law, lambda)?;
            change_coordinate(&law, &l, true)?;
            let lh = lambda_hat(&*law, &l, *degree)?;
            let (iso, check) = strict_iso_for_law(&law, &l, *degree)?;
            let x = ["x".to_string()];
            let mut lines = vec![
                format!("lambda_hat: {}", lh.fmt_with(&x)),
                format!("phi: {}", iso.phi.fmt_with(&x)),
                format!("phi^-1: {}", iso.phi_inverse.fmt_with(&x)),
                format!("target: {}", iso.target.to_string_poly()),
                format!("routes agree: {}", iso.routes_agree),
            ];
            if let Some(b) = check {
                lines.push(format!("matches recoordinated law: {b}"));
            }
            let failed = !iso.routes_agree || check == Some(false);
            Ok(Outcome {
                text: lines.join("\n"),
                json: json!({
                    "lambda_hat": lh.fmt_with(&x),
                    "phi": iso.phi.fmt_with(&x),
                    "phi_inverse": iso.phi_inverse.fmt_with(&x),
                    "target": iso.target.to_json(),
                    "routes_agree": iso.routes_agree,
                    "matches_recoordinated": check,
                }),
                failed,
            })
        }
        Verb::FixedPoints { bound } => {
            let g = load_group(c, &law, "C2")?;
            let n = match &g {
                GroupSpec::Quotient { ambient: 1, kernel } => kernel[0][0].unsigned_abs(),
                _ => return Err(GglError::Unsupported(format!("fixed points are implemented for C<n>, not {g}"))),
            };
            if law.id() != "mult/Z" {
                return Err(GglError::Unsupported("fixed points are implemented for the multiplicative law over Z".into()));
            }
            let fp = cyclic_fixed_points_mult(n)?;
            let kc = psi_kernel_check(&*law, n, *bound)?;
            let text = format!(
                "{}\nkilled: {}\nkernel check: {} ({} of {} test elements in the kernel)",
                fp.describe(),
                fp.killed.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", "),
                if kc.passed { "pass" } else { "fail" },
                kc.in_kernel,
                kc.tested
            );
            Ok(Outcome { text, json: json!({"presentation": fp, "kernel_check": kc}), failed: !kc.passed })
        }
        Verb::Kan { element: x } => {
            let g = load_group(c, &law, "C2")?;
            let v = kan_value(&*law, &g)?;
            let d = v.describe(&*law)?;
            match x {
                Some(x) => {
                    let e = element(&v, &law, x)?;
                    let s = v.fmt_elem(&e);
                    Ok(Outcome::ok(format!("{d}\n{s}"), json!({"value": d, "normal_form": s})))
                }
                None => Ok(Outcome::ok(d.clone(), json!({"value": d}))),
            }
        }
        Verb::LazardRelations { degree, two_torsion, verbose } => {
            let mode = if *two_torsion { Mode::TwoTorsion } else { Mode::Plain };
            let sys = universal_relations(*degree, mode)?;
            let names = sys.names();
            let ranks = sys.indecomposable_ranks();
            let mut lines = vec![format!("{} unknowns, {} relations, ranks over {}", names.len(), sys.relations.len(), sys.rank_field())];
            for r in &ranks {
                lines.push(format!(
                    "degree {}: {} unknowns, linear rank {}, indecomposables {}{}",
                    r.grading,
                    r.unknowns,
                    r.linear_rank,
                    r.indecomposables,
                    if r.complete { "" } else { " (truncated)" }
                ));
            }
            let consts: Vec<String> = sys.constant_relations().iter().map(ggl::ring::coef_to_string).collect();
            if !consts.is_empty() {
                lines.push(format!("constant relations: {}", consts.join(", ")));
            }
            if *verbose {
                for r in &sys.relations {
                    lines.push(format!("{} (degree {}): {}", r.source, r.grading, r.poly.fmt_with(&names)));
                }
            }
            let rels: Vec<Value> = sys
                .relations
                .iter()
                .map(|r| json!({"source": r.source, "grading": r.grading, "poly": r.poly.fmt_with(&names)}))
                .collect();
            Ok(Outcome::ok(
                lines.join("\n"),
                json!({"N": degree, "mode": mode, "unknowns": names, "ranks": ranks, "constant_relations": consts, "relations": rels}),
            ))
        }
        Verb::Classify { degree } => {
            let f = classify(&*law, *degree)?;
            Ok(Outcome::ok(format!("F(x, y) = {}", f.to_string_poly()), serde_json::to_value(f.to_json()).unwrap()))
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
    let common = cli.common;
    let out = match run(&cli.verb, &common) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let text = if common.json { serde_json::to_string_pretty(&out.json).unwrap() } else { out.text };
    let _ = writeln!(std::io::stdout(), "{text}");
    if let Some(path) = &common.fixture {
        match std::fs::read_to_string(path) {
            Ok(expected) if expected.trim_end() == text.trim_end() => {}
            Ok(_) => {
                eprintln!("fixture mismatch: {path}");
                return ExitCode::from(2);
            }
            Err(e) => {
                eprintln!("error: {path}: {e}");
                return ExitCode::from(1);
            }
        }
    }
    if out.failed {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}
