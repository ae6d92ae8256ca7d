use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::str::FromStr;

use digitsum::bigdigits::{check_base, to_base};
use digitsum::bounds::{
    certify_block_count, certify_corollary, certify_special, covering_ladder, exponent_ladder,
    power_certificate, power_multiplicity, sparse_multiple, stolarsky_check, BlockCertificate,
    SpecialKind, WitnessDigits,
};
use digitsum::heuristics::{scan, ScanKind};
use digitsum::oeis::{crosscheck, load_bfile, Cache, Generator, OeisError, SequenceId, Source};
use digitsum::rigorous::format_sig;
use digitsum::stewart::{
    baker_constant, baker_lower_bound, floor_report, gap_profile, gap_report, linear_form,
    ratio_estimate, split_at, stewart_floor, BakerParams, Height,
};
use digitsum::valuations::Factorizer;
use digitsum::{Error, Integer, Rational, RigorousReal};
use num_traits::{Num, Zero};

use crate::config::Settings;
use crate::expr::parse_expr;
use crate::{
    CertifyCommand, Command, OeisCommand, OutFormat, RangeArgs, ScanArgs, ScanKindArg, SpecialArg,
    StewartCommand,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error(transparent)]
    Oeis(#[from] OeisError),
    #[error(transparent)]
    Io(#[from] io::Error),
    /// A certificate or check failed; the report is already on stdout.
    #[error("verification failed")]
    Fail,
}

fn core_exit_code(e: &Error) -> u8 {
    match e {
        Error::HypothesisViolation(_)
        | Error::Indeterminate(_)
        | Error::NeedsPrecision(_)
        | Error::IncompleteFactorization { .. }
        | Error::UndefinedValuation => 1,
        _ => 2,
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => core_exit_code(e),
            CliError::Oeis(OeisError::Compute(e)) => core_exit_code(e),
            CliError::Oeis(OeisError::InvalidId(_) | OeisError::UnknownGenerator(_)) => 2,
            CliError::Oeis(_) | CliError::Io(_) | CliError::Fail => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Core(e) => e.kind(),
            CliError::Oeis(e) => e.kind(),
            CliError::Io(_) => "io",
            CliError::Fail => "fail",
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

struct Out<'a> {
    settings: &'a Settings,
    buf: String,
}

impl Out<'_> {
    fn line(&mut self, text: impl AsRef<str>) {
        self.buf.push_str(text.as_ref());
        self.buf.push('\n');
    }

    fn real(&self, x: &RigorousReal) -> String {
        if self.settings.show_radius {
            format!("{} ± {}", x.display_center(6), format_sig(&x.radius(), 3))
        } else {
            x.display_center(6)
        }
    }

    /// CSV cells for a rigorous value: center, plus radius under `--show-radius`.
    fn real_cells(&self, x: Option<&RigorousReal>) -> String {
        match (x, self.settings.show_radius) {
            (Some(x), true) => format!("{},{}", x.display_center(6), format_sig(&x.radius(), 3)),
            (Some(x), false) => x.display_center(6),
            (None, true) => ",".to_string(),
            (None, false) => String::new(),
        }
    }

    fn verdict(&mut self, passed: bool) -> Result<()> {
        self.line(if passed { "PASS" } else { "FAIL" });
        if passed {
            Ok(())
        } else {
            Err(CliError::Fail)
        }
    }

    fn flush(&mut self) -> io::Result<()> {
        let mut stdout = io::stdout().lock();
        stdout.write_all(self.buf.as_bytes())?;
        stdout.flush()?;
        self.buf.clear();
        Ok(())
    }
}

pub fn run(command: Command, settings: &Settings) -> Result<()> {
    let mut out = Out {
        settings,
        buf: String::new(),
    };
    let result = dispatch(command, &mut out);
    out.flush()?;
    result
}

fn dispatch(command: Command, out: &mut Out) -> Result<()> {
    let caps = &out.settings.caps;
    match command {
        Command::Digits { expr, base } => {
            let value = eval(&expr, out.settings)?;
            let e = to_base(&value, base)?;
            out.line(format!("{e}  s={} c={}", e.digit_sum(), e.nonzero_count()));
            Ok(())
        }
        Command::Ladder { a, b, k } => {
            out.line(exponent_ladder(a, b, k, caps)?.to_string());
            Ok(())
        }
        Command::Certify(c) => certify(c, out),
        Command::Stewart(c) => stewart(c, out),
        Command::Scan(args) => scan_command(args, out),
        Command::Oeis(c) => oeis(c, out),
        Command::SparseMultiple { n } => {
            let w = sparse_multiple(n, caps)?;
            out.line(format!("k={}", w.k));
            out.line(format!("3^{n} | 10^{} + 8", w.k));
            out.line(format!("order of 10 mod 3^{n}: {}", w.order));
            let how = match w.digits {
                WitnessDigits::Expanded(_) => "expanded",
                WitnessDigits::Structural => "structural",
            };
            out.line(format!(
                "c_10(10^{} + 8) = {} ({how})",
                w.k,
                w.nonzero_digits()
            ));
            Ok(())
        }
    }
}

fn eval(text: &str, settings: &Settings) -> Result<digitsum::Natural> {
    let expr = parse_expr(text).map_err(|e| CliError::Usage(format!("{text:?}: {e}")))?;
    Ok(expr.eval(&settings.caps)?)
}

fn short(n: &digitsum::Natural) -> String {
    let s = n.to_string();
    if s.len() <= 60 {
        s
    } else {
        format!("{}…{} ({} digits)", &s[..20], &s[s.len() - 20..], s.len())
    }
}

fn print_blocks(out: &mut Out, cert: &BlockCertificate) {
    out.line(format!("a={} b={}", cert.a, cert.b));
    let ladder: Vec<String> = cert.ladder.iter().map(u64::to_string).collect();
    out.line(format!("ladder: {}", ladder.join(" ")));
    for s in &cert.splits {
        out.line(format!(
            "level {}: N_{} = {}^{}·{} + {}",
            s.level,
            s.level,
            cert.b,
            s.exponent,
            short(&s.quotient),
            short(&s.remainder)
        ));
    }
    out.line(format!("certified c_{}(N) >= {}", cert.b, cert.k));
    out.line(format!("c_{}(N) = {}", cert.b, cert.nonzero_count));
}

fn certify(command: CertifyCommand, out: &mut Out) -> Result<()> {
    let caps = out.settings.caps.clone();
    match command {
        CertifyCommand::Blocks { n, a, b, k } => {
            let value = eval(&n, out.settings)?;
            let ladder = match k {
                Some(k) => exponent_ladder(a, b, k, &caps)?,
                None => {
                    if a < 2 {
                        return Err(Error::Precondition(format!("need a ≥ 2 (got {a})")).into());
                    }
                    covering_ladder(a, b, power_multiplicity(&value, a), &caps)?
                }
            };
            let cert = certify_block_count(&value, &ladder)?;
            print_blocks(out, &cert);
            out.verdict(cert.passed())
        }
        CertifyCommand::Stolarsky { m, base, r } => {
            let value = eval(&m, out.settings)?;
            let cert = stolarsky_check(&value, base, r)?;
            out.line(format!("bound {}", cert.bound));
            out.line(format!("s_{}(m) = {}", base, cert.digit_sum));
            let trace: Vec<String> = cert.trace.iter().map(short).collect();
            out.line(format!("trace: {}", trace.join(" -> ")));
            out.verdict(cert.passed())
        }
        CertifyCommand::Corollary { a, n } => {
            let cert = certify_corollary(a, n, &caps)?;
            out.line(format!(
                "ceil(log_4 {n}) = {} (log_4 {n} = {})",
                cert.floor.ceil_log4,
                out.real(&cert.floor.log4)
            ));
            print_blocks(out, &cert.certificate);
            out.verdict(cert.passed())
        }
        CertifyCommand::Special { kind, n, base } => {
            let kind = match kind {
                SpecialArg::Factorial => SpecialKind::Factorial,
                SpecialArg::Lcm => SpecialKind::Lcm,
            };
            let cert = certify_special(kind, n, base, &caps)?;
            out.line(format!("r = {}", cert.bound.r));
            out.line(format!("bound {}", cert.bound.bound));
            out.line(format!("s_{base}({kind}({n})) = {}", cert.digit_sum));
            if cert.bound.degenerate {
                out.line("r = 0: the bound is vacuous");
            }
            out.verdict(cert.passed())
        }
        CertifyCommand::Power { a, b, n } => {
            let f = Factorizer::new(caps.factor_limit);
            match power_certificate(a, b, n, &f, &caps)? {
                None => {
                    out.line(format!("no prime of {a} yields a ladder in base {b}"));
                    out.verdict(false)
                }
                Some(cert) => {
                    out.line(format!(
                        "d = {}, p = {}, nu_p(s) = {}",
                        cert.d, cert.p, cert.nu_p
                    ));
                    out.line(format!(
                        "valuation bound holds: {}",
                        cert.valuation_bound_holds
                    ));
                    print_blocks(out, &cert.block);
                    out.verdict(cert.passed())
                }
            }
        }
    }
}

fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || CliError::Usage(format!("invalid number {text:?}"));
    let t = text.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p = Integer::from_str(p.trim()).map_err(|_| bad())?;
        let q = Integer::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (int, frac) = t.split_once('.').unwrap_or((t, ""));
    if !frac.bytes().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let num = Integer::from_str_radix(&digits, 10).map_err(|_| bad())?;
    let den = num_traits::Pow::pow(Integer::from(10), frac.len() as u32);
    Ok(Rational::new(num, den))
}

fn parse_height(text: &str) -> Result<Height> {
    if text.trim() == "e" {
        Ok(Height::E)
    } else {
        Ok(Height::Value(parse_rational(text)?))
    }
}

fn check_range(args: &RangeArgs) -> Result<std::ops::RangeInclusive<u64>> {
    if args.n_from > args.n_to {
        return Err(CliError::Usage(format!(
            "empty range {}..={}",
            args.n_from, args.n_to
        )));
    }
    Ok(args.n_from..=args.n_to)
}

fn stewart(command: StewartCommand, out: &mut Out) -> Result<()> {
    let caps = out.settings.caps.clone();
    let precision = out.settings.precision;
    let f = Factorizer::new(caps.factor_limit);
    match command {
        StewartCommand::Gaps(args) => {
            let report = gap_report(
                args.a,
                args.b,
                check_range(&args)?,
                precision.start,
                &f,
                &caps,
            )?;
            let radius_col = if out.settings.show_radius {
                ",ratio_over_log_n_radius"
            } else {
                ""
            };
            out.line(format!("n,i,m_i,m_next,ratio,ratio_over_log_n{radius_col}"));
            for row in &report.rows {
                let cells = out.real_cells(row.ratio_over_log_n.as_ref());
                out.line(format!(
                    "{},{},{},{},{},{}",
                    row.n, row.i, row.m_i, row.m_next, row.ratio, cells
                ));
            }
            if let Some(c6) = &report.empirical_c6 {
                eprintln!("# empirical max ratio/log n = {}", out.real(c6));
            }
            let broken: Vec<u64> = report
                .telescoping
                .iter()
                .filter(|t| !t.1)
                .map(|t| t.0)
                .collect();
            if !broken.is_empty() {
                eprintln!("# telescoping identity failed for n = {broken:?}");
                return Err(CliError::Fail);
            }
            Ok(())
        }
        StewartCommand::Check(args) => {
            let (mut splits, mut ratios, mut forms, mut failures) = (0u64, 0u64, 0u64, Vec::new());
            for n in check_range(&args)? {
                let p = gap_profile(args.a, args.b, n, &f, &caps)?;
                if let Err(e) = p.verify().and_then(|_| p.tail_decomposition().map(|_| ())) {
                    failures.push(format!("n={n}: {e}"));
                }
                for i in 1..p.k() {
                    let s = match split_at(&p, i) {
                        Ok(s) => s,
                        Err(e) => {
                            failures.push(format!("n={n} i={i}: {e}"));
                            continue;
                        }
                    };
                    splits += 1;
                    match ratio_estimate(&p, &s, precision) {
                        Ok(Some(true)) => ratios += 1,
                        Ok(None) => {}
                        Ok(Some(false)) => failures.push(format!("n={n} i={i}: ratio estimate")),
                        Err(e) => failures.push(format!("n={n} i={i}: ratio estimate: {e}")),
                    }
                    match linear_form(&p, &s, precision) {
                        Ok(lf) if lf.passed() => forms += 1,
                        Ok(_) => failures.push(format!("n={n} i={i}: |Λ| < 2r/a^n")),
                        Err(e) => failures.push(format!("n={n} i={i}: Λ: {e}")),
                    }
                }
            }
            out.line(format!("splits checked: {splits}"));
            out.line(format!("ratio estimates certified: {ratios}"));
            out.line(format!("linear forms certified: {forms}"));
            for failure in &failures {
                out.line(format!("failure: {failure}"));
            }
            out.verdict(failures.is_empty())
        }
        StewartCommand::LinearForm { a, b, n, i } => {
            let p = gap_profile(a, b, n, &f, &caps)?;
            let s = split_at(&p, i)?;
            out.line(format!(
                "m = {}, m_i = {}, m_(i+1) = {}",
                p.m, s.m_i, s.m_next
            ));
            out.line(format!("q = {}", short(&s.q)));
            out.line(format!("r = {}", short(&s.r)));
            let lf = linear_form(&p, &s, precision)?;
            out.line(format!("Lambda = {}", out.real(&lf.value)));
            if let Some(below) = lf.below_truncation_bound {
                out.line(format!("|Lambda| < 2r/a^n: {below}"));
            }
            out.verdict(lf.passed())
        }
        StewartCommand::Baker {
            n,
            d,
            heights,
            coefficient_bound,
            clamp,
        } => {
            if heights.len() as u64 != n {
                return Err(CliError::Usage(format!(
                    "--n {n} needs {n} heights, got {}",
                    heights.len()
                )));
            }
            let heights = heights
                .iter()
                .map(|h| parse_height(h))
                .collect::<Result<Vec<_>>>()?;
            let big_b = parse_height(&coefficient_bound)?;
            let params = if clamp {
                BakerParams::clamped(heights, big_b, d)?
            } else {
                BakerParams::new(heights, big_b, d)?
            };
            out.line(format!(
                "constant (16nd)^(2(n+2)) = {}",
                baker_constant(n, d)
            ));
            let shown: Vec<String> = params.heights().iter().map(Height::to_string).collect();
            out.line(format!("heights: {}", shown.join(", ")));
            out.line(format!("B: {}", params.coefficient_bound()));
            out.line(format!(
                "log|Lambda| > {}",
                out.real(&baker_lower_bound(&params, precision.start))
            ));
            Ok(())
        }
        StewartCommand::Floor { n, c } => {
            let c = RigorousReal::from_rational(&parse_rational(&c)?, precision.start);
            let floor = stewart_floor(n, &c, precision)?;
            out.line(format!(
                "log n/(log log n + C) = {}",
                out.real(&floor.value)
            ));
            if floor.below_threshold {
                out.line("below threshold: n ≤ e^e");
            }
            Ok(())
        }
        StewartCommand::FloorReport(args) => {
            let report = floor_report(
                args.a,
                args.b,
                check_range(&args)?,
                precision.start,
                &f,
                &caps,
            )?;
            let radius_col = if out.settings.show_radius {
                ",normalized_radius"
            } else {
                ""
            };
            out.line(format!("n,c_b,normalized{radius_col},certified_k"));
            for row in &report.rows {
                let k = row.certified_k.map(|k| k.to_string()).unwrap_or_default();
                let cells = out.real_cells(Some(&row.normalized));
                out.line(format!("{},{},{},{}", row.n, row.nonzero_count, cells, k));
            }
            if let Some((n, v)) = &report.minimum {
                eprintln!(
                    "# minimum c_b(a^n)·log log n/log n = {} at n = {n}",
                    out.real(v)
                );
            }
            if !report.certificates_hold {
                eprintln!("# a block certificate exceeded c_b(a^n)");
                return Err(CliError::Fail);
            }
            Ok(())
        }
    }
}

fn scan_command(args: ScanArgs, out: &mut Out) -> Result<()> {
    let kind = match (args.kind, args.a) {
        (ScanKindArg::Power, Some(a)) => ScanKind::Power { a, b: args.b },
        (ScanKindArg::Power, None) => return Err(CliError::Usage("power scans need --a".into())),
        (ScanKindArg::Factorial, _) => ScanKind::Factorial { b: args.b },
        (ScanKindArg::Lcm, _) => ScanKind::Lcm { b: args.b },
    };
    if args.out == OutFormat::Plotdata && args.heuristic_out.is_none() {
        return Err(CliError::Usage(
            "--out plotdata needs --heuristic-out FILE".into(),
        ));
    }
    check_base(u32::try_from(args.b).map_err(|_| Error::InvalidBase(args.b))?)?;
    let rows = scan(kind, args.from..=args.to, &out.settings.caps)?;
    match args.out {
        OutFormat::Csv => {
            let radius_col = if out.settings.show_radius {
                ",heuristic_radius"
            } else {
                ""
            };
            out.line(format!("n,digit_count,s_b,c_b,bound,heuristic{radius_col}"));
            for r in &rows {
                let cells = out.real_cells(Some(&r.heuristic));
                out.line(format!(
                    "{},{},{},{},{},{}",
                    r.n, r.digit_count, r.s_b, r.c_b, r.certified_bound, cells
                ));
            }
        }
        OutFormat::Plotdata => {
            let mut curve = String::new();
            for r in &rows {
                out.line(format!("{} {}", r.n, r.s_b));
                writeln!(curve, "{} {}", r.n, r.heuristic.display_center(6)).expect("string write");
            }
            let path = args.heuristic_out.expect("checked above");
            fs::write(&path, curve)?;
        }
    }
    if let Some(bad) = rows.iter().find(|r| !r.is_consistent(args.b)) {
        eprintln!("# row n = {} is inconsistent", bad.n);
        return Err(CliError::Fail);
    }
    Ok(())
}

fn oeis(command: OeisCommand, out: &mut Out) -> Result<()> {
    let OeisCommand::Check {
        id,
        gen,
        from,
        to,
        online,
        fixtures,
        url_template,
    } = command;
    let id: SequenceId = id.parse()?;
    let generator: Generator = gen.parse()?;
    if from > to {
        return Err(CliError::Usage(format!("empty range {from}..={to}")));
    }
    let source = if online {
        let mut source = Source::network(Cache::from_env());
        if let (
            Source::Network {
                url_template: t, ..
            },
            Some(custom),
        ) = (&mut source, url_template)
        {
            *t = custom;
        }
        source
    } else {
        fixtures.map_or_else(Source::bundled, Source::Fixtures)
    };
    let bfile = load_bfile(&id, &source)?;
    let report = crosscheck(&bfile, generator, from..=to, &out.settings.caps)?;
    let matched = report.rows.iter().filter(|r| r.matches()).count();
    out.line(format!("{id} vs {generator}, n = {from}..{to}"));
    out.line(format!("{matched}/{} indices match", report.rows.len()));
    if let Some(first) = report.first_mismatch() {
        let row = report
            .rows
            .iter()
            .find(|r| r.index == first)
            .expect("mismatch row");
        out.line(format!(
            "first mismatch at n = {first}: b-file {} vs computed {}",
            short(&row.expected),
            short(&row.computed)
        ));
    }
    out.verdict(report.passed())
}
