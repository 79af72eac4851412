use std::fs;
use std::io::{self, Write};
use std::path::Path;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use quperf_core::factor::{factor_element_with, FactorLimits};
use quperf_core::search::{run_search, SearchConfig, SearchRecord};
use quperf_core::udf::{delta_star_of, i_star, i_star_of, sigma_star_int, unitary_divisors_of};
use quperf_core::verify::{self, CheckReport};
use quperf_core::{prime_above, Error, Factorization, PrimeWitness, QInt, RadicalValue, RingId};
use serde_json::{json, Value};

use crate::args::{Check, Cli, Command, ElementPower, Format, SearchArgs, SigmaArgs, VerifyArgs};
use crate::output::{versioned, Out};

pub enum Failure {
    Usage(String),
    Domain(Error),
    Verification(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(io) => Failure::Io(io),
            e => Failure::Domain(e),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type Res = Result<(), Failure>;

struct Ctx<'a, W: Write> {
    cli: &'a Cli,
    out: Out<W>,
}

impl<W: Write> Ctx<'_, W> {
    fn ring(&self) -> Result<RingId, Failure> {
        self.cli.ring.ok_or_else(|| {
            Failure::Usage("--ring is required; legal values are -163, -67, -43, -19, -11, -7, -3, -2, -1".into())
        })
    }

    fn limits(&self) -> FactorLimits {
        if self.cli.allow_large {
            FactorLimits::unlimited()
        } else {
            FactorLimits::default()
        }
    }

    fn element(&self, s: &str) -> Result<(QInt, Factorization), Failure> {
        let z = QInt::parse(self.ring()?, s)?;
        let f = factor_element_with(&z, &self.limits())?;
        Ok((z, f))
    }

    fn info(&self, msg: &str) {
        if !self.cli.quiet {
            eprintln!("{msg}");
        }
    }
}

pub fn dispatch<W: Write>(cli: &Cli, w: W) -> Res {
    let mut ctx = Ctx {
        cli,
        out: Out { format: cli.format, w },
    };
    match &cli.command {
        Command::Classify { prime } => classify(&mut ctx, prime),
        Command::Factor(e) => factor(&mut ctx, &e.element),
        Command::Delta(e) => value(&mut ctx, e, "delta"),
        Command::Istar(e) => value(&mut ctx, e, "istar"),
        Command::Divisors(e) => divisors(&mut ctx, &e.element),
        Command::Search(s) => search(&mut ctx, s),
        Command::Verify(v) => verify_cmd(&mut ctx, v),
        Command::Gmap { n } => gmap(&mut ctx, *n),
        Command::SigmaStar(s) => sigma(&mut ctx, s),
    }?;
    ctx.out.w.flush()?;
    Ok(())
}

fn classify<W: Write>(ctx: &mut Ctx<W>, p: &BigUint) -> Res {
    let ring = ctx.ring()?;
    let class = prime_above(p, ring)?;
    let primes = class.ring_primes();
    let names: Vec<String> = primes.iter().map(|q| q.to_string()).collect();
    let kind = class.kind().as_str();
    let text = match &class.witness {
        PrimeWitness::Inert => format!("{p} is inert in d={}", ring.d()),
        PrimeWitness::Ramified { pi } => format!("{p} ramifies in d={}: {p} ~ ({pi})^2", ring.d()),
        PrimeWitness::Split { pi, pi_bar } => format!("{p} splits in d={}: {p} ~ ({pi})({pi_bar})", ring.d()),
    };
    ctx.out.document(
        json!({"ring": ring.d(), "p": p.to_string(), "kind": kind, "primes": names}),
        (&["p", "kind", "primes"], vec![vec![p.to_string(), kind.into(), names.join(" ")]]),
        &text,
    )?;
    Ok(())
}

fn factor<W: Write>(ctx: &mut Ctx<W>, element: &str) -> Res {
    let (z, f) = ctx.element(element)?;
    let ring = z.ring();
    let unit = ring.unit(f.unit());
    let rows: Vec<Vec<String>> = f
        .factors()
        .iter()
        .map(|(p, e)| vec![p.to_string(), e.to_string(), p.norm().to_string()])
        .collect();
    let factors: Vec<Value> = f
        .factors()
        .iter()
        .map(|(p, e)| json!({"prime": p.to_string(), "exponent": e, "norm": p.norm().to_string()}))
        .collect();
    let mut text = format!("{z} = {unit}");
    for (p, e) in f.factors() {
        text.push_str(&format!(" * ({p})"));
        if *e > 1 {
            text.push_str(&format!("^{e}"));
        }
    }
    ctx.out.document(
        json!({"ring": ring.d(), "z": z.to_string(), "norm": z.norm().to_string(), "unit": unit.to_string(), "factors": factors}),
        (&["prime", "exponent", "norm"], rows),
        &text,
    )?;
    Ok(())
}

fn value_json(v: &RadicalValue) -> Value {
    json!({
        "value": v.to_json(),
        "display": v.to_string(),
        "rational": v.as_rational().map(|q| q.to_string()),
        "approx": v.to_f64(),
    })
}

/// Exact value, followed by a decimal approximation unless it is an integer.
fn value_text(v: &RadicalValue) -> String {
    match v.as_rational() {
        Some(q) if q.is_integer() => q.to_string(),
        _ => format!("{v} ≈ {:.12}", v.to_f64()),
    }
}

fn value<W: Write>(ctx: &mut Ctx<W>, e: &ElementPower, which: &str) -> Res {
    let (z, f) = ctx.element(&e.element)?;
    let v = if which == "delta" { delta_star_of(&f, e.power)? } else { i_star_of(&f, e.power)? };
    let mut body = json!({"ring": z.ring().d(), "z": z.to_string(), "function": which, "power": e.power});
    if let (Value::Object(b), Value::Object(extra)) = (&mut body, value_json(&v)) {
        b.extend(extra);
    }
    ctx.out.document(
        body,
        (&["z", "power", "value"], vec![vec![z.to_string(), e.power.to_string(), v.to_string()]]),
        &value_text(&v),
    )?;
    Ok(())
}

fn divisors<W: Write>(ctx: &mut Ctx<W>, element: &str) -> Res {
    let (z, f) = ctx.element(element)?;
    let set = unitary_divisors_of(f);
    if set.base().len() > 24 {
        return Err(Failure::Usage(format!("{z} has 2^{} unitary divisors; refusing to list them", set.base().len())));
    }
    let divs: Vec<QInt> = set.iter().collect();
    let rows: Vec<Vec<String>> = divs.iter().map(|d| vec![d.to_string(), d.norm().to_string()]).collect();
    let text = divs.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n");
    ctx.out.document(
        json!({
            "ring": z.ring().d(),
            "z": z.to_string(),
            "count": divs.len(),
            "divisors": divs.iter().map(|d| json!({"d": d.to_string(), "norm": d.norm().to_string()})).collect::<Vec<_>>(),
        }),
        (&["divisor", "norm"], rows),
        &text,
    )?;
    Ok(())
}

fn default_jobs(jobs: Option<usize>) -> usize {
    jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn search<W: Write>(ctx: &mut Ctx<W>, s: &SearchArgs) -> Res {
    let mut cfg = SearchConfig::new(ctx.ring()?, s.power, s.target.clone(), s.max_norm, s.mode)?;
    cfg.jobs = default_jobs(s.jobs);
    cfg.checkpoint = s.checkpoint.clone();
    cfg.verbose = s.verbose;
    cfg.stop_after_tasks = s.stop_after_tasks;
    if let Some(c) = s.chunk {
        cfg.chunk = c;
    }
    let outcome = run_search(&cfg)?;
    let hits = outcome.hits().count();
    match ctx.out.format {
        Format::Json => {
            for r in &outcome.records {
                ctx.out.json_line(&r.to_json())?;
            }
        }
        Format::Csv => {
            let rows: Vec<_> = outcome.records.iter().map(|r| r.csv_fields()).collect();
            ctx.out.csv(&SearchRecord::csv_header(), rows)?;
        }
        Format::Text => {
            for r in &outcome.records {
                ctx.out.line(&r.to_text())?;
            }
            ctx.out.line(&format!("{hits} hits"))?;
        }
    }
    if !outcome.complete {
        ctx.info(&format!(
            "stopped early: {} of {} tasks recorded; rerun with the same checkpoint to resume",
            count_done(&cfg)?,
            outcome.tasks
        ));
    } else {
        ctx.info(&format!("visited {} candidates in {} tasks", outcome.visited, outcome.tasks));
    }
    Ok(())
}

fn count_done(cfg: &SearchConfig) -> Result<usize, Failure> {
    match &cfg.checkpoint {
        Some(p) => Ok(quperf_core::search::Checkpoint::load(p)?.map_or(0, |c| c.done.len())),
        None => Ok(0),
    }
}

fn load_hits(path: &Path, ring: RingId) -> Result<Vec<SearchRecord>, Failure> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let v: Value = serde_json::from_str(line)
            .map_err(|e| Failure::Usage(format!("{}:{}: {e}", path.display(), i + 1)))?;
        out.push(SearchRecord::from_json(ring, &v)?);
    }
    Ok(out)
}

fn all_rings() -> Vec<RingId> {
    RingId::all().collect()
}

fn verify_cmd<W: Write>(ctx: &mut Ctx<W>, v: &VerifyArgs) -> Res {
    let jobs = default_jobs(v.jobs);
    let rings = ctx.cli.ring.map_or_else(all_rings, |r| vec![r]);
    let hits = match &v.hits {
        Some(path) => {
            let ring = ctx.cli.ring.ok_or_else(|| Failure::Usage("--hits needs --ring to parse elements".into()))?;
            if !matches!(v.check, Check::EvenNorm | Check::GaussianCount | Check::Mod6) {
                return Err(Failure::Usage("--hits applies to thm2.2, thm2.3 and thm2.5 only".into()));
            }
            Some(load_hits(path, ring)?)
        }
        None => None,
    };
    let reports: Vec<CheckReport> = match v.check {
        Check::EvenNorm => {
            let ts: Vec<i64> = v.target.map_or_else(|| (2..=6).collect(), |t| vec![t]);
            let ns: Vec<u32> = v.power.map_or_else(|| vec![1, 2], |n| vec![n]);
            match &hits {
                Some(h) => vec![verify::check_even_norm(json!({"source": "hits file"}), h)],
                None => vec![verify::run_even_norm(&rings, &ns, &ts, v.max_norm, jobs)?],
            }
        }
        Check::GaussianCount => {
            let t = v.target.unwrap_or(2);
            match &hits {
                Some(h) => vec![verify::check_gaussian_count(&BigInt::from(t), h)?],
                None => vec![verify::run_gaussian_count(t, v.max_norm, jobs)?],
            }
        }
        Check::EisensteinNumerator => vec![verify::check_eisenstein_numerators(v.max_norm, jobs)?],
        Check::Mod6 => match &hits {
            Some(h) => vec![verify::check_mod6(rings[0], h)?],
            None => rings
                .iter()
                .map(|&r| verify::run_mod6(r, v.max_norm, jobs))
                .collect::<Result<_, _>>()?,
        },
        Check::Lift => {
            let b = v.ratio.clone().unwrap_or_else(|| BigRational::from_integer(2.into()));
            vec![verify::check_lift(&b, v.bound, &rings)?]
        }
        Check::Zeta => vec![verify::check_zeta()],
    };
    let passed = reports.iter().all(CheckReport::passes);
    match ctx.out.format {
        Format::Json => {
            let doc = versioned(json!({
                "passed": passed,
                "reports": reports.iter().map(CheckReport::to_json).collect::<Vec<_>>(),
            }));
            ctx.out.json_line(&doc)?;
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        r.theorem.clone(),
                        r.status().as_str().into(),
                        r.checked.to_string(),
                        r.skipped.to_string(),
                        r.violations.len().to_string(),
                        r.population.to_string(),
                    ]
                })
                .collect();
            ctx.out.csv(&["theorem", "status", "checked", "skipped", "violations", "population"], rows)?;
        }
        Format::Text => {
            for r in &reports {
                ctx.out.line(&format!(
                    "{} {}: {} checked, {} skipped, {} violations  {}",
                    r.theorem,
                    r.status().as_str(),
                    r.checked,
                    r.skipped,
                    r.violations.len(),
                    r.population
                ))?;
                for n in &r.notes {
                    ctx.out.line(&format!("  note: {n}"))?;
                }
                for bad in &r.violations {
                    ctx.out.line(&format!("  violation: {bad}"))?;
                }
            }
        }
    }
    if passed {
        Ok(())
    } else {
        let failed: Vec<&str> = reports.iter().filter(|r| !r.passes()).map(|r| r.theorem.as_str()).collect();
        Err(Failure::Verification(format!("violations found in {}", failed.join(", "))))
    }
}

fn gmap<W: Write>(ctx: &mut Ctx<W>, n: u64) -> Res {
    let ring = ctx.ring()?;
    let g = verify::g_map(n, ring)?;
    let v = i_star(&g, 1)?;
    ctx.out.document(
        json!({"ring": ring.d(), "n": n, "g": g.to_string(), "norm": g.norm().to_string(), "istar1": value_json(&v)}),
        (&["n", "g", "norm", "istar1"], vec![vec![n.to_string(), g.to_string(), g.norm().to_string(), v.to_string()]]),
        &format!("g({n}) = {g}  I*_1 = {v}"),
    )?;
    Ok(())
}

fn sigma<W: Write>(ctx: &mut Ctx<W>, s: &SigmaArgs) -> Res {
    if let Some(n) = &s.n {
        let v = sigma_star_int(n, s.k)?;
        ctx.out.document(
            json!({"n": n.to_string(), "k": s.k, "value": v.to_string()}),
            (&["n", "k", "value"], vec![vec![n.to_string(), s.k.to_string(), v.to_string()]]),
            &v.to_string(),
        )?;
        return Ok(());
    }
    let upto = s.upto.expect("clap requires --n or --upto");
    if s.k != 1 {
        return Err(Failure::Usage("--upto lists solutions of σ*(m) = b·m and takes no --k".into()));
    }
    let b = s.ratio.clone().unwrap_or_else(|| BigRational::from_integer(2.into()));
    if b <= BigRational::from_integer(1.into()) {
        return Err(Failure::Usage("--ratio must exceed 1".into()));
    }
    let members = verify::unitary_b_perfect(&b, upto)?;
    let text = members.iter().map(|m| m.to_string()).collect::<Vec<_>>().join("\n");
    ctx.out.document(
        json!({"ratio": b.to_string(), "upto": upto, "members": members}),
        (&["m"], members.iter().map(|m| vec![m.to_string()]).collect()),
        &text,
    )?;
    Ok(())
}
