use crate::args::*;
use hk_lattice::golden::{run_golden, GoldenInputs};
use hk_lattice::num::{parse_rational, render_rational};
use hk_lattice::walls::ChamberReport;
use hk_lattice::{
    chamber_report, full_table, jx_rank_report, moduli_report, mukai_pair, shioda_tate_rank,
    solve_gram, tensor_by_polarization, BBForm, Error, FibrationData, GramTemplate,
    IntersectionConstraint, K3Context, MukaiVector, Result,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::fmt::Write;

/// A finished command: its report in both formats and, when the report
/// itself records a failure, the error to exit with after printing.
pub struct Output {
    pub json: Value,
    pub text: String,
    pub failure: Option<Error>,
}

impl Output {
    fn ok(json: Value, text: String) -> Self {
        Output {
            json,
            text,
            failure: None,
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("reports serialize to JSON")
}

fn mukai_vector(k3: &K3Args) -> Result<MukaiVector> {
    let ctx = K3Context::new(k3.d.clone())?;
    let [r, a, b] = k3.v0.clone();
    Ok(MukaiVector::new(r, a, b, ctx))
}

fn parse_c(c: &str) -> Result<BigRational> {
    parse_rational(c)
        .ok_or_else(|| Error::Usage(format!("Fujiki constant {c:?} is not a rational number")))
}

pub fn run(cli: &Cli) -> Result<Output> {
    let bound = BigInt::from(cli.bound);
    match &cli.command {
        Command::Mukai(args) => mukai(args),
        Command::Moduli(args) => moduli(args),
        Command::Cones(args) => cones(args, &bound),
        Command::FujikiTable(args) => fujiki_table(args),
        Command::FujikiSolve(args) => fujiki_solve(args),
        Command::MwRank(args) => mw_rank(args),
        Command::Reproduce(args) => reproduce(args),
    }
}

fn mukai(args: &MukaiArgs) -> Result<Output> {
    let v = mukai_vector(&args.k3)?;
    let lattice = v.context().lattice();
    let mut map = Map::new();
    let mut text = String::new();
    map.insert("v".into(), to_json(&v));
    writeln!(text, "v = {v} (d = {})", v.context().d()).unwrap();
    let square = v.square();
    map.insert("square".into(), json_int(&square));
    writeln!(text, "v^2 = {square}").unwrap();
    let content = v.content();
    map.insert("content".into(), json_int(&content));
    writeln!(text, "content = {content}").unwrap();
    if !v.is_zero() {
        let div = lattice.divisibility(&v.coords())?;
        map.insert("divisibility".into(), json_int(&div));
        writeln!(text, "divisibility = {div}").unwrap();
    }
    if let Some([r, a, b]) = args.with.clone() {
        let w = MukaiVector::new(r, a, b, v.context());
        let p = mukai_pair(&v, &w)?;
        map.insert("with".into(), to_json(&w));
        map.insert("pairing".into(), json_int(&p));
        writeln!(text, "v.{w} = {p}").unwrap();
    }
    if let Some(n) = &args.tensor {
        let t = tensor_by_polarization(&v, n);
        map.insert("tensor".into(), json_int(n));
        map.insert("tensored".into(), to_json(&t));
        writeln!(text, "v ⊗ O({n}C) = {t}").unwrap();
    }
    Ok(Output::ok(Value::Object(map), text))
}

fn json_int(v: &BigInt) -> Value {
    hk_lattice::num::int_to_json(v)
}

fn render_matrix(m: &[Vec<BigInt>]) -> String {
    let rows: Vec<String> = m
        .iter()
        .map(|r| {
            format!(
                "[{}]",
                r.iter()
                    .map(BigInt::to_string)
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(T::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn moduli(args: &ModuliArgs) -> Result<Output> {
    let v0 = mukai_vector(&args.k3)?;
    let report = moduli_report(args.m, &v0)?;
    let mut text = String::new();
    writeln!(
        text,
        "moduli space M_{{{}v0}}, v0 = {} (d = {})",
        report.m,
        report.v0,
        v0.context().d()
    )
    .unwrap();
    writeln!(text, "dimension: {}", report.dimension).unwrap();
    writeln!(
        text,
        "symplectic resolution: {}",
        report.admits_symplectic_resolution
    )
    .unwrap();
    writeln!(text, "OG10 type: {}", report.is_og10_type).unwrap();
    let fact = to_json(&report.factoriality);
    writeln!(text, "factoriality: {}", fact.as_str().unwrap_or_default()).unwrap();
    writeln!(text, "NS basis: {}", join(&report.ns_basis)).unwrap();
    writeln!(text, "NS Gram: {}", render_matrix(&report.ns_gram)).unwrap();
    writeln!(text, "positivity checked: {}", report.positivity_checked).unwrap();
    Ok(Output::ok(to_json(&report), text))
}

fn cones(args: &ConesArgs, bound: &BigInt) -> Result<Output> {
    let v0 = mukai_vector(&args.k3)?;
    let report = chamber_report(&v0, bound, args.relabel)?;
    Ok(Output::ok(to_json(&report), render_cones(&report)))
}

fn render_cones(r: &ChamberReport) -> String {
    let mut t = String::new();
    writeln!(t, "v0 = {}", r.v0).unwrap();
    writeln!(
        t,
        "NS basis: {}   Gram: {}",
        join(&r.ns_basis),
        render_matrix(&r.ns_gram)
    )
    .unwrap();
    writeln!(t, "rays:").unwrap();
    for ray in &r.rays {
        writeln!(
            t,
            "  {:<6} {:<12} {:<8} {}",
            ray.label,
            ray.class.to_string(),
            ray.coords.to_string(),
            ray.interpretation
        )
        .unwrap();
    }
    writeln!(t, "chambers:").unwrap();
    for c in &r.chambers {
        writeln!(t, "  <{}, {}>  {}", c.rays[0], c.rays[1], c.model).unwrap();
    }
    writeln!(t, "walls:").unwrap();
    for w in &r.wall_classes {
        let ty = to_json(&w.wall_type);
        writeln!(
            t,
            "  {:<14} {:<12} ray {:<8} {}",
            ty.as_str().unwrap_or_default(),
            w.cls.to_string(),
            w.wall_ray.to_string(),
            w.interpretation
        )
        .unwrap();
    }
    if let Some(th) = &r.theta {
        writeln!(
            t,
            "{} = {} {}  square {}  pairing with {} {}",
            th.label, th.class, th.coords, th.square, r.rays[0].label, th.pairing_with_lagrangian
        )
        .unwrap();
    }
    let completeness = to_json(&r.completeness);
    writeln!(
        t,
        "bound {}: {}",
        r.enumeration_bound,
        completeness.as_str().unwrap_or_default()
    )
    .unwrap();
    t
}

fn preset_form() -> BBForm {
    BBForm::og10_l_theta()
}

fn fujiki_table(args: &FujikiTableArgs) -> Result<Output> {
    let form = match (&args.preset, &args.gram) {
        (Some(Preset::Og10LTheta), _) => preset_form(),
        (None, Some(gram)) => {
            let rows = gram
                .split(';')
                .map(|row| {
                    row.split(',')
                        .map(|x| {
                            parse_rational(x)
                                .ok_or_else(|| Error::Usage(format!("bad Gram entry {x:?}")))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            BBForm::new(rows, args.n, parse_c(&args.c)?)?
        }
        (None, None) => return Err(Error::Usage("either --preset or --gram is required".into())),
    };
    let table = full_table(&form)?;
    let failure = table.check_integral().err();
    let gram: Vec<Vec<Value>> = form
        .gram()
        .iter()
        .map(|r| r.iter().map(hk_lattice::num::rational_to_json).collect())
        .collect();
    let json = json!({
        "n": form.n(),
        "c": hk_lattice::num::rational_to_json(form.c()),
        "gram": gram,
        "integral": failure.is_none(),
        "table": to_json(&table),
    });
    let mut text = String::new();
    writeln!(text, "n = {}, c = {}", form.n(), render_rational(form.c())).unwrap();
    for (e, v) in &table.entries {
        let mono: Vec<String> = e
            .iter()
            .enumerate()
            .map(|(i, k)| format!("D{i}^{k}"))
            .collect();
        writeln!(text, "  {:<16} {}", mono.join(" "), render_rational(v)).unwrap();
    }
    writeln!(text, "integral: {}", failure.is_none()).unwrap();
    Ok(Output {
        json,
        text,
        failure,
    })
}

fn fujiki_solve(args: &FujikiSolveArgs) -> Result<Output> {
    if let Some(Preset::Og10LTheta) = args.preset {
        let template = GramTemplate::parse("0,p;p,u", 5, BigRational::from_integer(945.into()))?;
        let constraint =
            IntersectionConstraint::new(vec![5, 5], BigRational::from_integer(120.into()));
        let solution = solve_gram(&template, &[constraint])?;
        let p = solution.unique_value("p").ok_or_else(|| {
            Error::Inconsistency("L^5 Theta^5 = 120 does not determine q(L,Theta) uniquely".into())
        })?;
        let json = json!({ "q_L_Theta": hk_lattice::num::rational_to_json(p) });
        let text = format!(
            "q(L,Theta) = {}  (from L^5 Theta^5 = 120, q(L) = 0, c = 945; q(Theta) undetermined)\n",
            render_rational(p)
        );
        return Ok(Output::ok(json, text));
    }
    let template_text = args.template.as_deref().unwrap_or_default();
    let template = GramTemplate::parse(template_text, args.n, parse_c(&args.c)?)?;
    let constraints = args
        .constraint
        .iter()
        .map(|c| IntersectionConstraint::parse(c))
        .collect::<Result<Vec<_>>>()?;
    let solution = solve_gram(&template, &constraints)?;
    let mut text = String::new();
    if solution.solutions.is_empty() {
        writeln!(text, "no rational solution").unwrap();
    }
    for s in &solution.solutions {
        let parts: Vec<String> = s
            .iter()
            .map(|(n, v)| format!("{n} = {}", render_rational(v)))
            .collect();
        writeln!(text, "{}", parts.join(", ")).unwrap();
    }
    if !solution.undetermined.is_empty() {
        writeln!(text, "undetermined: {}", solution.undetermined.join(", ")).unwrap();
    }
    for r in &solution.residuals {
        writeln!(text, "residual: {r}").unwrap();
    }
    Ok(Output::ok(to_json(&solution), text))
}

fn mw_rank(args: &MwRankArgs) -> Result<Output> {
    if let Some(h22) = args.h22 {
        let report = jx_rank_report(h22)?;
        let text = format!(
            "rho(J) = {}\nMW rank = {}\ntorsion free: {}\n",
            report.rho_j, report.mw_rank, report.torsion_free
        );
        return Ok(Output::ok(to_json(&report), text));
    }
    let data = FibrationData {
        ns_rank: args.ns_rank.unwrap_or_default(),
        boundary_components: args.boundary,
        has_section: !args.no_section,
    };
    let rank = shioda_tate_rank(&data)?;
    Ok(Output::ok(
        json!({ "mw_rank": rank }),
        format!("MW rank = {rank}\n"),
    ))
}

fn reproduce(args: &ReproduceArgs) -> Result<Output> {
    let mut inputs = GoldenInputs::default();
    if let Some(m) = &args.mukai_gram {
        inputs.mukai_gram = parse_int_matrix(m).map_err(Error::Usage)?;
    }
    if let Some(m) = &args.bb_gram {
        inputs.bb_gram = parse_int_matrix(m).map_err(Error::Usage)?;
    }
    let checks = run_golden(&inputs);
    let failed = checks.iter().filter(|c| !c.pass).count();
    let mut text = String::new();
    let width = checks
        .iter()
        .map(|c| c.name.chars().count())
        .max()
        .unwrap_or(0);
    for c in &checks {
        let status = if c.pass { "PASS" } else { "FAIL" };
        let pad = width - c.name.chars().count();
        write!(
            text,
            "{status}  {}{}  {}",
            c.name,
            " ".repeat(pad),
            c.actual
        )
        .unwrap();
        if !c.pass {
            write!(text, "  (expected {})", c.expected).unwrap();
        }
        text.push('\n');
    }
    writeln!(text, "{} passed, {failed} failed", checks.len() - failed).unwrap();
    let json = json!({
        "passed": checks.len() - failed,
        "failed": failed,
        "checks": to_json(&checks),
    });
    let failure =
        (failed > 0).then(|| Error::Inconsistency(format!("{failed} golden checks failed")));
    Ok(Output {
        json,
        text,
        failure,
    })
}
