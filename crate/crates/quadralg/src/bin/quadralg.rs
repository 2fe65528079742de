//! Command-line front end: presentation generation, bounded completion,
//! Hilbert-series counting, Koszul certificates, and a one-shot
//! verification of the built-in triangle-algebra numbers.

use std::fmt::Write as _;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::json;

use quadralg::automaton::{build_automaton, Automaton};
use quadralg::field::{format_rational, Field, PrimeField, Rationals, DEFAULT_PRIME};
use quadralg::graphs::{self, Graph};
use quadralg::linalg::GradedComponent;
use quadralg::parse::{format_presentation, parse_poly, parse_presentation};
use quadralg::quadratic::{
    dual_dims, eigenbasis, graded_dims, koszul_certificate, relation_subspace, sandwich_subspace,
    wn_dim_rational, wn_dims_mod_p, Presentation,
};
use quadralg::rewrite::{complete, RewriteSystem};
use quadralg::series::fit_recurrence;
use quadralg::word::MonomialOrder;
use quadralg::Error;

#[derive(Parser)]
#[command(name = "quadralg", version, about = "Exact computations on quadratic graded algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a presentation (built-in, file, or graph-generated)
    Present(PresentArgs),
    /// Complete a presentation to a rewriting system up to a degree cap
    Complete(CompleteArgs),
    /// Count normal words and fit the Hilbert series
    Hilbert(HilbertArgs),
    /// Produce a finite-degree Koszulness certificate
    Koszul(KoszulArgs),
    /// Re-derive every built-in triangle-algebra value and report PASS/WARN/FAIL
    VerifyPaper(VerifyArgs),
}

#[derive(Args)]
struct SourceArgs {
    /// Presentation source: `k3`, `gr-k3`, `free3`, `qn-graph:<path>`, or a
    /// presentation file path
    #[arg(long)]
    source: String,
}

#[derive(Args)]
struct OutputArgs {
    /// Output file (stdout when omitted); a `<path>.meta.json` sidecar
    /// records the run configuration
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct PresentArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CompleteArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Comma-separated generator labels, highest first (e.g. `c,b,e,f,a,d`)
    #[arg(long)]
    order: String,
    /// Resolve ambiguities of overlap degree up to this cap
    #[arg(long, default_value_t = 3)]
    cap: usize,
    /// Abort if completion produces more rules than this
    #[arg(long, default_value_t = 1000)]
    max_rules: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct HilbertArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    order: String,
    #[arg(long, default_value_t = 3)]
    cap: usize,
    #[arg(long, default_value_t = 1000)]
    max_rules: usize,
    /// Count words of length 0..=nmax
    #[arg(long, default_value_t = 12)]
    nmax: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct KoszulArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value_t = 5)]
    nmax: usize,
    /// Enumerate every weight vector even when the reduced enumeration applies
    #[arg(long)]
    full_weights: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Verification depth for the linear-algebra checks
    #[arg(long, default_value_t = 5)]
    nmax: usize,
    /// Treat the documented print discrepancies as failures with diffs
    #[arg(long)]
    strict_paper: bool,
}

fn load_presentation(source: &str) -> Result<Presentation<Rationals>, Error> {
    match source {
        "k3" => Ok(graphs::k3_fixture()),
        "gr-k3" => Ok(graphs::gr_k3_fixture()),
        "free3" => Ok(graphs::free3_fixture()),
        _ => {
            if let Some(path) = source.strip_prefix("qn-graph:") {
                let text = std::fs::read_to_string(path)?;
                let graph = if text.trim_start().starts_with('{') {
                    Graph::parse_json(&text)?
                } else {
                    Graph::parse_text(&text)?
                };
                graphs::qn_graph_presentation(&graph)
            } else {
                let text = std::fs::read_to_string(source)?;
                let (gens, relations) = parse_presentation(&text)?;
                Presentation::new(Rationals, gens, relations)
            }
        }
    }
}

fn emit(output: &OutputArgs, payload: &str, meta: serde_json::Value) -> Result<(), Error> {
    match &output.output {
        None => {
            print!("{}", payload);
            Ok(())
        }
        Some(path) => {
            std::fs::write(path, payload)?;
            std::fs::write(
                format!("{}.meta.json", path),
                serde_json::to_string_pretty(&meta)? + "\n",
            )?;
            Ok(())
        }
    }
}

fn completed_system(
    source: &str,
    order: &str,
    cap: usize,
    max_rules: usize,
) -> Result<RewriteSystem<Rationals>, Error> {
    let pres = load_presentation(source)?;
    let ord = MonomialOrder::from_labels(&pres.gens, order)?;
    complete(&pres.gens, &pres.relations, ord, cap, max_rules)
}

fn cmd_present(args: &PresentArgs) -> Result<(), Error> {
    let pres = load_presentation(&args.source.source)?;
    let payload = format_presentation(&pres.gens, &pres.relations);
    emit(
        &args.output,
        &payload,
        json!({"command": "present", "source": args.source.source}),
    )
}

fn cmd_complete(args: &CompleteArgs) -> Result<(), Error> {
    let sys = completed_system(&args.source.source, &args.order, args.cap, args.max_rules)?;
    let mut payload = sys.to_text();
    for amb in &sys.unresolved {
        let _ = writeln!(
            payload,
            "unresolved {} ({:?})",
            amb.overlap_word.format(&sys.gens),
            amb.kind
        );
    }
    emit(
        &args.output,
        &payload,
        json!({
            "command": "complete",
            "source": args.source.source,
            "order": args.order,
            "cap": args.cap,
            "rules": sys.rules.len(),
            "unresolved": sys.unresolved.len(),
        }),
    )
}

fn automaton_for(sys: &RewriteSystem<Rationals>) -> Result<Automaton, Error> {
    build_automaton(sys.gens.len(), &sys.forbidden_patterns())
}

fn counts_as_rationals(aut: &Automaton, nmax: usize) -> Vec<BigRational> {
    aut.counts_through(nmax)
        .into_iter()
        .map(|c| BigRational::from_integer(BigInt::from(c)))
        .collect()
}

fn cmd_hilbert(args: &HilbertArgs) -> Result<(), Error> {
    let sys = completed_system(&args.source.source, &args.order, args.cap, args.max_rules)?;
    let aut = automaton_for(&sys)?;
    let counts = counts_as_rationals(&aut, args.nmax);
    let patterns: Vec<String> = sys
        .forbidden_patterns()
        .iter()
        .map(|p| p.format(&sys.gens))
        .collect();
    let max_order = args.nmax.saturating_sub(1) / 2;
    let mut warnings: Vec<String> = Vec::new();
    let body = match fit_recurrence(&counts, max_order) {
        Ok(fit) => {
            let triangle_denominator: Vec<BigRational> =
                [1i64, -6, 5, -1].iter().map(|&x| Rationals.from_i64(x)).collect();
            if fit.denominator == triangle_denominator {
                warnings.push(
                    "denominator normalized as 1 - 6x + 5x^2 - x^3; a printed form \
                     x^3 - 6x^2 + 5x - 1 disagrees with the recurrence it accompanies"
                        .to_string(),
                );
            }
            let mut v = fit.to_json(&counts);
            v["patterns"] = json!(patterns);
            v["warnings"] = json!(warnings);
            v
        }
        Err(e) => json!({
            "counts": counts.iter().map(format_rational).collect::<Vec<_>>(),
            "patterns": patterns,
            "recurrence": serde_json::Value::Null,
            "error": e.to_string(),
        }),
    };
    emit(
        &args.output,
        &(serde_json::to_string_pretty(&body)? + "\n"),
        json!({
            "command": "hilbert",
            "source": args.source.source,
            "order": args.order,
            "cap": args.cap,
            "nmax": args.nmax,
        }),
    )
}

fn cmd_koszul(args: &KoszulArgs) -> Result<bool, Error> {
    let pres = load_presentation(&args.source.source)?;
    let reduced = pres.k3_like && !args.full_weights;
    let report = koszul_certificate(&pres, args.nmax, reduced)?;
    emit(
        &args.output,
        &(serde_json::to_string_pretty(&report.to_json())? + "\n"),
        json!({
            "command": "koszul",
            "source": args.source.source,
            "nmax": args.nmax,
            "reduced": reduced,
        }),
    )?;
    Ok(report.all_pass)
}

// ---------------------------------------------------------------------------
// verify-paper
// ---------------------------------------------------------------------------

#[derive(PartialEq, Clone, Copy)]
enum Status {
    Pass,
    Warn,
    Fail,
}

struct Check {
    id: String,
    location: String,
    status: Status,
    detail: String,
}

fn check(id: &str, location: &str, ok: bool, detail: String) -> Check {
    Check {
        id: id.to_string(),
        location: location.to_string(),
        status: if ok { Status::Pass } else { Status::Fail },
        detail,
    }
}

fn warn(id: &str, location: &str, detail: String) -> Check {
    Check {
        id: id.to_string(),
        location: location.to_string(),
        status: Status::Warn,
        detail,
    }
}

fn run_verification(nmax: usize) -> Result<Vec<Check>, Error> {
    let mut checks = Vec::new();
    let series_nmax = 12usize;

    let k3 = graphs::k3_fixture();
    let gr = graphs::gr_k3_fixture();
    let k3_sys = completed_system("k3", "c,b,e,f,a,d", 3, 1000)?;
    let gr_sys = completed_system("gr-k3", "f,e,d,c,b,a", 8, 1000)?;
    let k3_aut = automaton_for(&k3_sys)?;
    let gr_aut = automaton_for(&gr_sys)?;

    // 1: normal-word counts
    let counts: Vec<u128> = (0..=4).map(|n| k3_aut.count(n).to_u128().unwrap()).collect();
    checks.push(check(
        "1 counts",
        "length-count table",
        counts == [1, 6, 31, 157, 793],
        format!("lengths 0..4 -> {:?}", counts),
    ));

    // 2: minimal recurrence and generating function
    let fitted = fit_recurrence(&counts_as_rationals(&k3_aut, series_nmax), 5)?;
    let rec: Vec<BigRational> = [6i64, -5, 1].iter().map(|&x| Rationals.from_i64(x)).collect();
    let den: Vec<BigRational> = [1i64, -6, 5, -1].iter().map(|&x| Rationals.from_i64(x)).collect();
    checks.push(check(
        "2 recurrence",
        "Hilbert series statement",
        fitted.recurrence == rec && fitted.denominator == den,
        format!(
            "T(n+1) = 6T(n) - 5T(n-1) + T(n-2); denominator {}",
            fitted
                .denominator
                .iter()
                .map(format_rational)
                .collect::<Vec<_>>()
                .join(",")
        ),
    ));
    checks.push(warn(
        "W1 series sign",
        "Hilbert series statement",
        "computed denominator is 1 - 6x + 5x^2 - x^3; the printed form x^3 - 6x^2 + 5x - 1 \
         disagrees with the recurrence next to it"
            .to_string(),
    ));

    // 3: completion of the plain presentation
    let mut lhs: Vec<String> = k3_sys
        .lhs_words()
        .iter()
        .map(|w| w.0.iter().map(|&id| k3_sys.gens.label(id)).collect())
        .collect();
    lhs.sort();
    checks.push(check(
        "3 completion",
        "forbidden-substring basis theorem",
        lhs == ["ba", "bf", "ca", "cb", "cd", "cef"] && k3_sys.unresolved.is_empty(),
        format!("leading words {:?}, unresolved {}", lhs, k3_sys.unresolved.len()),
    ));

    // 4: completion of the graded presentation and the coefficient family
    let mut gr_lhs: Vec<String> = gr_sys
        .lhs_words()
        .iter()
        .map(|w| w.0.iter().map(|&id| gr_sys.gens.label(id)).collect())
        .collect();
    gr_lhs.sort();
    let mut expected: Vec<String> = ["db", "ec", "fc", "fd", "fe"].iter().map(|s| s.to_string()).collect();
    for j in 1..=6usize {
        expected.push(format!("e{}b", "f".repeat(j)));
    }
    expected.sort();
    let alphas_ok = (1..=6usize)
        .all(|j| matches!(gr_sys.family_coefficient(j), Ok(a) if a == Rationals.one()));
    checks.push(check(
        "4 graded completion",
        "resolution lemma for the e f^n b family",
        gr_lhs == expected && alphas_ok,
        format!(
            "leading words {:?}; d f^j b coefficient is 1 for j = 1..6: {}",
            gr_lhs, alphas_ok
        ),
    ));
    checks.push(warn(
        "W4 family alpha",
        "resolution lemma for the e f^n b family",
        "the lemma's recursion alpha_{j+1} = alpha_j/(1+alpha_j) suggests alpha_j = 1/j, but \
         the canonical normal-form coefficient of d f^j b is 1 for every j; the printed \
         degree-4 relation (with -1 on dffb) agrees with the completed system"
            .to_string(),
    ));

    // 5: the two series agree
    let a_counts = k3_aut.counts_through(series_nmax);
    let b_counts = gr_aut.counts_through(series_nmax);
    checks.push(check(
        "5 series equality",
        "graded-comparison proposition",
        a_counts == b_counts,
        format!("counts agree through length {}", series_nmax),
    ));

    // 6: automaton counts vs linear algebra
    let depth = nmax.min(5);
    let k3_dims = graded_dims(&k3, depth)?;
    let gr_dims = graded_dims(&gr, depth)?;
    let bridge_ok = (0..=depth).all(|n| {
        k3_aut.count(n).to_u128() == Some(k3_dims[n]) && gr_aut.count(n).to_u128() == Some(gr_dims[n])
    });
    checks.push(check(
        "6 bridge",
        "basis theorem vs W_n definition",
        bridge_ok,
        format!("count(n) = 6^n - dim W_n for n <= {} on both presentations", depth),
    ));

    // 7: the weight-(2,2,1) intersection and its exact expression
    let ambient = Arc::new(GradedComponent::new(&gr.gens, 3, Some(vec![2, 2, 1]))?);
    let rv = sandwich_subspace(&Rationals, &gr.relations, &ambient, 0)?;
    let vr = sandwich_subspace(&Rationals, &gr.relations, &ambient, 1)?;
    let inter = rv.intersect(&vr)?;
    let g = &gr.gens;
    let r = |s: &str| parse_poly(g, s).unwrap();
    let x = r("d*e - e*d - f*d + f*e")
        .mul(&r("b - c"))?
        .add(&r("d*f - f*d - e*d + e*f").mul(&r("c - a"))?);
    let corrected = r("e + f")
        .mul(&r("d*b - d*a"))?
        .neg()
        .sub(&r("d + f").mul(&r("e*c - e*b"))?)
        .sub(&r("d + e").mul(&r("f*a - f*c"))?);
    checks.push(check(
        "7 degree-3 intersection",
        "one-dimensional intersection proposition",
        inter.dim() == 1 && inter.contains(&x)? && x == corrected,
        format!(
            "dim = {}; r4(b-c)+r5(c-a) = -(e+f)r1 - (d+f)r2 - (d+e)r3 exactly",
            inter.dim()
        ),
    ));
    checks.push(warn(
        "W3 identity sign",
        "closing identity of the intersection section",
        "the identity holds with -(e+f)r1 as the first term; the printed +(e+f)r1 leaves \
         a nonzero difference 2(e+f)(da - db)"
            .to_string(),
    ));

    // 8: the original-relations element of RV intersect VR
    let gk = &k3.gens;
    let rk = |s: &str| parse_poly(gk, s).unwrap();
    let (r1, r2, r3) = (
        rk("d*b - d*a + a*b - b*a"),
        rk("e*c - e*b + b*c - c*b"),
        rk("f*a - f*c + c*a - a*c"),
    );
    let r4 = rk("d*e - e*d - f*d + f*e + d*c - c*d + a*e - e*a");
    let r5 = rk("d*f - f*d - e*d + e*f + d*c - c*d + b*f - f*b");
    let lhs8 = r1
        .mul(&rk("c"))?
        .add(&r2.mul(&rk("a"))?)
        .add(&r3.mul(&rk("b"))?)
        .add(&r4.mul(&rk("c - b"))?)
        .add(&r5.mul(&rk("a - c"))?);
    let rhs8 = rk("a")
        .mul(&r2)?
        .add(&rk("b").mul(&r3)?)
        .add(&rk("c").mul(&r1)?)
        .add(&rk("d").mul(&r2.add(&r3))?)
        .add(&rk("e").mul(&r1.add(&r3))?)
        .add(&rk("f").mul(&r1.add(&r2))?);
    checks.push(check(
        "8 relation identity",
        "nonzero-intersection element for the plain algebra",
        lhs8 == rhs8,
        "r1c + r2a + r3b + r4(c-b) + r5(a-c) matches its left-multiplied form".to_string(),
    ));

    // 9: dual dimensions and the signed convolution
    let dual = dual_dims(&Rationals, &gr.gens, &gr.relations, depth)?;
    let expected_dual: Vec<u128> = [1u128, 6, 5, 1, 0, 0][..=depth].to_vec();
    let conv: Vec<BigInt> = (0..=depth)
        .map(|n| {
            (0..=n)
                .map(|j| {
                    let t = BigInt::from(gr_dims[n - j]) * BigInt::from(dual[j]);
                    if j % 2 == 0 {
                        t
                    } else {
                        -t
                    }
                })
                .sum()
        })
        .collect();
    let conv_ok = conv
        .iter()
        .enumerate()
        .all(|(n, v)| *v == BigInt::from(if n == 0 { 1 } else { 0 }));
    checks.push(check(
        "9 dual dims",
        "dual-series theorem",
        dual == expected_dual && conv_ok,
        format!("dual dims {:?}; signed convolution {:?}", dual, conv.iter().map(|v| v.to_string()).collect::<Vec<_>>()),
    ));

    // 10: the distributivity certificate, reduced and full enumerations
    let cert_nmax = nmax.clamp(4, 5);
    let reduced_report = koszul_certificate(&gr, cert_nmax, true)?;
    let full_report = koszul_certificate(&gr, cert_nmax, false)?;
    checks.push(check(
        "10 certificate",
        "distributive-triple corollary (verified through finite degree only)",
        reduced_report.all_pass && full_report.all_pass,
        format!(
            "reduced {} cells, full {} cells, all pass through n = {}",
            reduced_report.cells.len(),
            full_report.cells.len(),
            cert_nmax
        ),
    ));

    // eigenbasis cross-check and the documented r4 sign discrepancy
    let eig = eigenbasis(&gr)?;
    let espace = eig.relation_space()?;
    let ep = |s: &str| parse_poly(&eig.gens, s).unwrap().to_cyclotomic();
    let display_form = espace.contains(&ep("uw2*uw2 - 2*u1*uw + uw*u1"))?;
    let relabeled_form = espace.contains(&ep("uw2*uw2 - 2*u1*uw - uw*u1"))?;
    checks.push(check(
        "10b eigenbasis",
        "cyclic-eigenvector basis",
        espace.dim() == 5 && display_form && !relabeled_form,
        "transformed span contains f^2 - 2de + ed (display form)".to_string(),
    ));
    checks.push(warn(
        "W2 r4 sign",
        "cyclic-eigenvector basis",
        "the display r4 = u_{w^2}^2 - 2 u_1 u_w + u_w u_1 lies in the span; the relabeled \
         list's f^2 - 2de - ed (minus sign) does not"
            .to_string(),
    ));

    // 11: the graph generator reproduces the fixture
    let (same_span, fam3_empty) = graphs::qn_spanning_check()?;
    checks.push(check(
        "11 graph generator",
        "graph-algebra theorem applied to the triangle",
        same_span && fam3_empty,
        format!("span match {}, no family-(iii) relations {}", same_span, fam3_empty),
    ));

    // 12: prime-field and rational arithmetic agree
    let field_depth = nmax.min(4);
    let fp = PrimeField::new(DEFAULT_PRIME);
    let mut agree = true;
    for pres in [&k3, &gr] {
        let modp = wn_dims_mod_p(&pres.gens, &pres.relations, field_depth, DEFAULT_PRIME)?;
        for n in 2..=field_depth {
            agree &= wn_dim_rational(&pres.gens, &pres.relations, n)? == modp[n];
            agree &= relation_subspace(pres, n, None)?.dim() == modp[n];
        }
    }
    let gr_p = gr.to_prime(fp)?;
    agree &= dual_dims(&fp, &gr_p.gens, &gr_p.relations, field_depth)?
        == dual_dims(&Rationals, &gr.gens, &gr.relations, field_depth)?;
    checks.push(check(
        "12 field agreement",
        "arithmetic cross-check",
        agree,
        format!("F_{} vs Q through degree {}", DEFAULT_PRIME, field_depth),
    ));

    Ok(checks)
}

fn cmd_verify(args: &VerifyArgs) -> Result<bool, Error> {
    let checks = run_verification(args.nmax)?;
    let mut ok = true;
    for c in &checks {
        let status = match c.status {
            Status::Pass => "PASS",
            Status::Warn => {
                if args.strict_paper {
                    "DIFF"
                } else {
                    "WARN"
                }
            }
            Status::Fail => "FAIL",
        };
        if c.status == Status::Fail || (args.strict_paper && c.status == Status::Warn) {
            ok = false;
        }
        println!("{:4} {:24} {:48} {}", status, c.id, c.location, c.detail);
    }
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome: Result<bool, Error> = match &cli.command {
        Command::Present(a) => cmd_present(a).map(|_| true),
        Command::Complete(a) => cmd_complete(a).map(|_| true),
        Command::Hilbert(a) => cmd_hilbert(a).map(|_| true),
        Command::Koszul(a) => cmd_koszul(a),
        Command::VerifyPaper(a) => cmd_verify(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}
