use std::process::ExitCode;

use necklace::bch::Bch;
use necklace::counting::{Counter, Pipeline};
use necklace::finite_field::{find_primitive_polynomial, format_advice, parse_advice, FqCtx, FqnCtx};
use necklace::indexing::{Indexer, Lookup};
use necklace::irreducible::{count_irreducible_with, index_irreducible_with};
use necklace::oracle::factorize;
use necklace::oracle::suite::{run_all, Bounds};
use necklace::strings::{rotate, NkString};
use necklace::top_heavy::{count_top_heavy, is_top_heavy, top_heavy_rotation};
use necklace::Error;
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::output::Out;
use crate::{BchArgs, BchCmd, Cli, Command, FamilyCmd, IrredCmd, PipelineArg, TopHeavyCmd};

pub struct CliError {
    pub code: u8,
    pub message: String,
}

type CliResult<T> = std::result::Result<T, CliError>;

fn input(message: impl Into<String>) -> CliError {
    CliError { code: 2, message: message.into() }
}

fn advice(message: impl Into<String>) -> CliError {
    CliError { code: 3, message: message.into() }
}

/// Library errors as exit codes: size guardrails give 4, everything else is
/// a problem with the arguments.
fn lib(e: Error) -> CliError {
    let code = match e {
        Error::TooBig | Error::AlphabetTooLarge(_) => 4,
        _ => 2,
    };
    CliError { code, message: e.to_string() }
}

/// Errors raised while loading or using advice.
fn advice_err(e: Error) -> CliError {
    match e {
        Error::TooBig => lib(e),
        e => advice(e.to_string()),
    }
}

fn num(text: &str, what: &str) -> CliResult<BigUint> {
    text.trim().parse().map_err(|_| input(format!("{what} must be a nonnegative integer, got {text:?}")))
}

fn alphabet(text: &str) -> CliResult<BigUint> {
    let q = num(text, "q")?;
    if q < BigUint::from(2u32) {
        return Err(lib(Error::AlphabetTooSmall));
    }
    Ok(q)
}

fn word(text: &str, q: &BigUint) -> CliResult<NkString> {
    NkString::parse(text, q).map_err(lib)
}

/// `p` or `p^e`.
fn q_spec(text: &str) -> CliResult<(BigUint, usize)> {
    let (p, e) = match text.split_once('^') {
        Some((p, e)) => (p, e.trim().parse::<usize>().map_err(|_| input(format!("bad exponent in {text:?}")))?),
        None => (text, 1),
    };
    let p = num(p, "p")?;
    if e == 0 {
        return Err(input("the exponent in a q-spec must be positive"));
    }
    FqCtx::prime(p.clone()).map_err(lib)?;
    Ok((p, e))
}

fn load_advice(path: &str) -> CliResult<FqnCtx> {
    let text = std::fs::read_to_string(path).map_err(|e| advice(format!("cannot read {path}: {e}")))?;
    parse_advice(&text).map_err(advice_err)
}

fn s(v: &impl ToString) -> Value {
    Value::String(v.to_string())
}

pub fn run(cli: &Cli) -> CliResult<ExitCode> {
    let out = Out::new(cli.format);
    let pipeline = match cli.pipeline {
        PipelineArg::Auto => Pipeline::Auto,
        PipelineArg::Direct => Pipeline::Direct,
        PipelineArg::Encoded => Pipeline::Encoded,
    };
    let counter = Counter::new(pipeline);
    let indexer = Indexer::new(counter);
    match &cli.command {
        Command::Necklace(cmd) => family(&out, &counter, &indexer, cmd, false)?,
        Command::Lyndon(cmd) => family(&out, &counter, &indexer, cmd, true)?,
        Command::ClassesLess { word: w, q, period } => {
            let q = alphabet(q)?;
            let x = word(w, &q)?;
            let inputs = json!({ "word": w, "q": s(&q), "period": period });
            match period {
                None => {
                    let c = counter.count_classes_less(&x).map_err(lib)?;
                    out.emit("classes-less", inputs, &c.to_string(), s(&c));
                }
                Some(p) => {
                    let exact = counter.count_g_exact(&x, *p).map_err(lib)?;
                    let leq = counter.count_g_leq(&x, *p).map_err(lib)?;
                    out.emit("classes-less", inputs, &format!("{exact} {leq}"), json!({ "exact": s(&exact), "at_most": s(&leq) }));
                }
            }
        }
        Command::Irred(cmd) => irred(&out, &counter, &indexer, cmd)?,
        Command::Bch(cmd) => bch(&out, cmd)?,
        Command::Topheavy(cmd) => top_heavy(&out, cmd)?,
        Command::Selftest { max_n } => return Ok(selftest(&out, *max_n)),
    }
    Ok(ExitCode::SUCCESS)
}

fn family(out: &Out, counter: &Counter, ix: &Indexer, cmd: &FamilyCmd, lyndon: bool) -> CliResult<()> {
    let op = if lyndon { "lyndon" } else { "necklace" };
    match cmd {
        FamilyCmd::Count { n, q } => {
            let q = alphabet(q)?;
            let necklaces = counter.total_necklaces(*n, &q).map_err(lib)?;
            let lyndon_words = counter.total_aperiodic(*n, &q).map_err(lib)?;
            out.emit(
                &format!("{op} count"),
                json!({ "n": n, "q": s(&q) }),
                &format!("{necklaces} {lyndon_words}"),
                json!({ "necklaces": s(&necklaces), "lyndon": s(&lyndon_words) }),
            );
        }
        FamilyCmd::Index { n, q, j } => {
            let q = alphabet(q)?;
            let j = num(j, "j")?;
            let got = if lyndon { ix.index_lyndon(*n, &q, &j) } else { ix.index_necklace(*n, &q, &j) };
            let inputs = json!({ "n": n, "q": s(&q), "j": s(&j) });
            match got.map_err(lib)? {
                Lookup::Found(w) => out.emit(&format!("{op} index"), inputs, &w.to_string(), s(&w)),
                Lookup::TooLarge => out.emit(&format!("{op} index"), inputs, "TOO_LARGE", json!("TOO_LARGE")),
            }
        }
        FamilyCmd::Rank { word: w, q } => {
            let q = alphabet(q)?;
            let x = word(w, &q)?;
            let r = if lyndon { ix.reverse_index_lyndon(&x) } else { ix.reverse_index_necklace(&x) }.map_err(lib)?;
            out.emit(
                &format!("{op} rank"),
                json!({ "word": w, "q": s(&q) }),
                &format!("{} {}", r.rank, r.canonical),
                json!({ "rank": s(&r.rank), "canonical": s(&r.canonical) }),
            );
        }
    }
    Ok(())
}

fn irred(out: &Out, counter: &Counter, ix: &Indexer, cmd: &IrredCmd) -> CliResult<()> {
    match cmd {
        IrredCmd::Count { q_spec: spec, n } => {
            let (p, e) = q_spec(spec)?;
            let q = p.pow(e as u32);
            let c = count_irreducible_with(counter, &q, *n).map_err(lib)?;
            out.emit("irred count", json!({ "q": spec, "n": n }), &c.to_string(), s(&c));
        }
        IrredCmd::Index { q_spec: spec, n, i, advice: path } => {
            let (p, e) = q_spec(spec)?;
            let i = num(i, "i")?;
            let ctx = load_advice(path)?;
            if ctx.base().p() != &p || ctx.base().e() != e || ctx.n() != *n {
                return Err(advice(format!(
                    "advice describes F_({}^{}) of degree {}, not {spec} of degree {n}",
                    ctx.base().p(),
                    ctx.base().e(),
                    ctx.n()
                )));
            }
            let inputs = json!({ "q": spec, "n": n, "i": s(&i), "advice": path });
            match index_irreducible_with(ix, &ctx, &i).map_err(|e| match e {
                Error::ZeroIndex => lib(e),
                e => advice_err(e),
            })? {
                Lookup::Found(f) => {
                    let coeffs = ctx.base().format_poly(&f);
                    out.emit("irred index", inputs, &coeffs, json!({ "coefficients": coeffs, "poly": ctx.base().pretty_poly(&f) }));
                }
                Lookup::TooLarge => out.emit("irred index", inputs, "TOO_LARGE", json!("TOO_LARGE")),
            }
        }
        IrredCmd::GenAdvice { q_spec: spec, n, seed, factors } => {
            let (p, e) = q_spec(spec)?;
            if *n == 0 {
                return Err(lib(Error::EmptyWord));
            }
            let base = FqCtx::with_random_modulus(p, e, *seed).map_err(lib)?;
            let order = base.q().pow(*n as u32) - 1u32;
            let factors = match factors {
                Some(text) => text
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .map(|t| num(t, "factor"))
                    .collect::<CliResult<Vec<_>>>()?,
                None => factorize(&order).map_err(|_| {
                    CliError { code: 4, message: format!("{order} is too large to factor here; pass --factors") }
                })?,
            };
            let ctx = find_primitive_polynomial(&base, *n, &factors, *seed).map_err(lib)?;
            let text = format_advice(&ctx);
            out.emit("irred gen-advice", json!({ "q": spec, "n": n, "seed": seed }), text.trim_end(), json!(text));
        }
    }
    Ok(())
}

fn code(args: &BchArgs) -> CliResult<Bch> {
    let ctx = load_advice(&args.advice)?;
    Bch::new(ctx, num(&args.d, "d")?).map_err(lib)
}

fn row_index(text: &str) -> CliResult<BigUint> {
    num(text, "row")
}

fn bch(out: &Out, cmd: &BchCmd) -> CliResult<()> {
    match cmd {
        BchCmd::Rows { code: args, row } => {
            let c = code(args)?;
            let inputs = json!({ "d": args.d, "advice": args.advice, "row": row });
            match row {
                None => {
                    let g = c.generator_row_count().map_err(lib)?;
                    let h = c.parity_row_count().map_err(lib)?;
                    out.emit("bch rows", inputs, &format!("{g} {h}"), json!({ "generator": s(&g), "parity": s(&h) }));
                }
                Some(r) => {
                    let r = row_index(r)?;
                    let gen = or_too_large(c.generator_row(&r))?;
                    let par = or_too_large(c.parity_row(&r))?;
                    let gen_text = gen.as_ref().map_or("TOO_LARGE".into(), |(o, j)| format!("m={} size={} j={j}", o.m, o.size));
                    let par_text = par.as_ref().map_or("TOO_LARGE".into(), |o| format!("m={} size={}", o.m, o.size));
                    out.emit(
                        "bch rows",
                        inputs,
                        &format!("generator {gen_text}\nparity {par_text}"),
                        json!({ "generator": gen_text, "parity": par_text }),
                    );
                }
            }
        }
        BchCmd::GenEntry { code: args, row, col } => {
            let c = code(args)?;
            let alpha = c.ctx().parse_element(col).map_err(lib)?;
            let inputs = json!({ "d": args.d, "advice": args.advice, "row": row, "col": col });
            match or_too_large(c.generator_entry(&row_index(row)?, &alpha))? {
                Some(v) => {
                    let t = c.ctx().base().format_elem(&v);
                    out.emit("bch gen-entry", inputs, &t, json!(t));
                }
                None => out.emit("bch gen-entry", inputs, "TOO_LARGE", json!("TOO_LARGE")),
            }
        }
        BchCmd::PcEntry { code: args, row, col } => {
            let c = code(args)?;
            let alpha = c.ctx().parse_element(col).map_err(lib)?;
            let inputs = json!({ "d": args.d, "advice": args.advice, "row": row, "col": col });
            match or_too_large(c.parity_entry(&row_index(row)?, &alpha))? {
                Some(v) => {
                    let t = c.ctx().format_element(&v);
                    out.emit("bch pc-entry", inputs, &t, json!(t));
                }
                None => out.emit("bch pc-entry", inputs, "TOO_LARGE", json!("TOO_LARGE")),
            }
        }
        BchCmd::GenMatrix { code: args } => {
            let c = code(args)?;
            let m = c.generator_matrix().map_err(lib)?;
            let base = c.ctx().base();
            let lines: Vec<String> =
                m.iter().map(|row| row.iter().map(|v| base.format_elem(v)).collect::<Vec<_>>().join(" ")).collect();
            out.emit("bch gen-matrix", json!({ "d": args.d, "advice": args.advice }), &lines.join("\n"), json!(lines));
        }
        BchCmd::PcMatrix { code: args } => {
            let c = code(args)?;
            let m = c.parity_matrix().map_err(lib)?;
            let ctx = c.ctx();
            // Entries of F_{q^n} are bracketed since they contain spaces.
            let lines: Vec<String> = m
                .iter()
                .map(|row| row.iter().map(|v| format!("[{}]", ctx.format_element(v))).collect::<Vec<_>>().join(" "))
                .collect();
            out.emit("bch pc-matrix", json!({ "d": args.d, "advice": args.advice }), &lines.join("\n"), json!(lines));
        }
    }
    Ok(())
}

fn or_too_large<T>(r: necklace::Result<T>) -> CliResult<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::TooLarge) => Ok(None),
        Err(e) => Err(lib(e)),
    }
}

fn top_heavy(out: &Out, cmd: &TopHeavyCmd) -> CliResult<()> {
    let two = BigUint::from(2u32);
    match cmd {
        TopHeavyCmd::Check { word: w } => {
            let t = is_top_heavy(&word(w, &two)?).map_err(lib)?;
            out.emit("topheavy check", json!({ "word": w }), &t.to_string(), json!(t));
        }
        TopHeavyCmd::Canon { word: w } => {
            let x = word(w, &two)?;
            let i = top_heavy_rotation(&x).map_err(lib)?;
            let y = rotate(&x, i);
            out.emit("topheavy canon", json!({ "word": w }), &format!("{i} {y}"), json!({ "shift": i, "rotation": s(&y) }));
        }
        TopHeavyCmd::Count { n } => {
            let c = count_top_heavy(*n).map_err(lib)?;
            out.emit("topheavy count", json!({ "n": n }), &c.to_string(), s(&c));
        }
    }
    Ok(())
}

fn selftest(out: &Out, max_n: usize) -> ExitCode {
    let start = std::time::Instant::now();
    let outcomes = run_all(&Bounds::reduced(max_n));
    let mut ok = true;
    for o in &outcomes {
        let (tag, detail) = match &o.result {
            Ok(m) => ("PASS", m),
            Err(m) => {
                ok = false;
                ("FAIL", m)
            }
        };
        out.emit(
            "selftest",
            json!({ "check": o.id, "max_n": max_n }),
            &format!("{tag} {} {} ({:.2}s): {detail}", o.id, o.name, o.seconds),
            json!({ "status": tag, "name": o.name, "detail": detail, "seconds": o.seconds }),
        );
    }
    let total = start.elapsed().as_secs_f64();
    let summary = if ok { "all checks passed" } else { "mismatch found" };
    out.emit("selftest", json!({ "max_n": max_n }), &format!("{summary} in {total:.2}s"), json!({ "ok": ok, "seconds": total }));
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_specs() {
        assert_eq!(q_spec("2").ok().map(|(p, e)| (p.to_string(), e)), Some(("2".into(), 1)));
        assert_eq!(q_spec("3^2").ok().map(|(p, e)| (p.to_string(), e)), Some(("3".into(), 2)));
        assert_eq!(q_spec("4").err().map(|e| e.code), Some(2));
        assert_eq!(q_spec("3^0").err().map(|e| e.code), Some(2));
        assert_eq!(q_spec("x").err().map(|e| e.code), Some(2));
    }

    #[test]
    fn error_codes() {
        assert_eq!(lib(Error::TooBig).code, 4);
        assert_eq!(lib(Error::NotAperiodic).code, 2);
        assert_eq!(advice_err(Error::NotPrimitive).code, 3);
        assert_eq!(alphabet("2").ok(), Some(BigUint::from(2u32)));
        assert_eq!(alphabet("1").err().map(|e| e.code), Some(2));
    }
}
