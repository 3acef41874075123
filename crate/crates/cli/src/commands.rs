//! One function per subcommand.

use std::fmt::Write as _;

use serde_json::{json, Value};
use syzcalc::geometry::curves::{chi_discrepancy, kernel_bundle_numerics};
use syzcalc::geometry::{
    curve_nonvanishing_criterion, evaluation_map, gonality_bound_report, koszul_of_sections, effective_bound_report,
    very_ampleness_order, AmplenessReport, AmplenessTarget, CriterionVerdict, CurveNumerics, Evidence,
    SectionModule, Strategy,
};
use syzcalc::gradedmod::{BettiTable, ModuleDescription};
use syzcalc::groebner::{intersect_ideals, IdealBasis};
use syzcalc::koszul::{koszul_cohomology_dim, koszul_table, GradedAction, ModuleAction};
use syzcalc::polygraph::{ext_report, polygraph_ideal, s_module_presentation, PolygraphLimits, PolygraphSpec};
use syzcalc::{Field, MonomialOrder, RingRef};

use crate::input::{read_file, read_ideals, read_module, AmpleInput};
use crate::job::{Command, IdealArgs, JobSpec, StrategyChoice};
use crate::{verify, Failure, Output};

pub fn execute(job: &JobSpec) -> Result<Output, Failure> {
    let field = job.field();
    match &job.command {
        Command::Gb(args) => gb(job, args),
        Command::Eliminate { ideal, drop } => eliminate(job, ideal, drop),
        Command::Intersect(args) => intersect(job, args),
        Command::Resolve { module, maps } => {
            let m = read_module(module, field)?;
            let res = m.minimal_free_resolution(m.ring().nvars() + 1, &job.gb_options())?;
            let betti = res.betti_table();
            let modules: Vec<Value> = res.modules().iter().map(|f| json!(f.shifts())).collect();
            let mut text = format!("ranks: {:?}\n{betti}", res.ranks());
            let mut differentials = Vec::new();
            if *maps {
                for j in 0..res.length() {
                    let cols = res.matrix(j);
                    let rows = cols.first().map_or(0, Vec::len);
                    let table: Vec<Vec<String>> =
                        (0..rows).map(|r| cols.iter().map(|c| c[r].to_string()).collect()).collect();
                    let _ = writeln!(text, "d{}:", j + 1);
                    for row in &table {
                        let _ = writeln!(text, "  [{}]", row.join(", "));
                    }
                    differentials.push(json!(table));
                }
            }
            let mut value = json!({
                "ranks": res.ranks(),
                "shifts": modules,
                "betti": betti.to_entries(),
                "projective_dimension": betti.projective_dimension(),
            });
            if *maps {
                value["differentials"] = json!(differentials);
            }
            Ok(Output::new(value, text).with_csv(betti.to_csv()))
        }
        Command::Betti(module) => {
            let betti = read_module(module, field)?.betti_table(&job.gb_options())?;
            Ok(table_output(&betti))
        }
        Command::Koszul { module, b, d, p, q, p_max, q_min, q_max } => {
            let range = |start: i64, v_dim: usize| {
                let lo = q_min.unwrap_or(start);
                (p_max.unwrap_or(v_dim), lo, q_max.unwrap_or(lo + 3))
            };
            match (b, d) {
                (Some(b), Some(d)) => {
                    if module.file.is_some() || module.ideal.is_some() {
                        return Err(Failure::Input("--b/--d describe sections; drop the module input".into()));
                    }
                    let s = SectionModule::new(*b, *d, field)?;
                    koszul_output(&s, *p, *q, range(s.first_degree(), s.v_dim()))
                }
                (None, None) => {
                    let m = read_module(module, field)?;
                    let act = ModuleAction::standard(&m)?;
                    koszul_output(&act, *p, *q, range(act.support_start(), act.v_dim()))
                }
                _ => Err(Failure::Input("--b and --d go together".into())),
            }
        }
        Command::Sections { b, d, q_max, koszul } => {
            let s = SectionModule::new(*b, *d, field)?;
            let q0 = s.first_degree();
            let dims: Vec<Value> =
                (q0..=*q_max).map(|q| json!({"q": q, "forms_of_degree": s.form_degree(q), "dimension": s.piece_dim(q)})).collect();
            let pres = s.presentation(*q_max, &job.gb_options())?;
            let desc = ModuleDescription::from_module(&pres);
            let mut text = format!("sections of 𝒪({b} + {d}q), V = H⁰(𝒪({d})) of dimension {}\n", s.v_dim());
            for q in q0..=*q_max {
                let _ = writeln!(text, "q = {q}: dimension {}", s.piece_dim(q));
            }
            let _ = write!(text, "presentation:\n{}", desc.to_text());
            let mut value = json!({"b": b, "d": d, "pieces": dims, "presentation": desc});
            if let Some(pm) = koszul {
                let table = koszul_table(&s, *pm, q0, *q_max);
                let _ = write!(text, "koszul:\n{table}");
                value["koszul"] = json!(table.to_entries());
            }
            Ok(Output::new(value, text))
        }
        Command::Ample { m, input, p_max, strategy, trials } => {
            let strategy = match strategy {
                StrategyChoice::Exhaustive => Strategy::Exhaustive,
                StrategyChoice::Sampled => Strategy::Sampled { seed: job.seed, trials: *trials },
            };
            let (target, jets) = match (m, input) {
                (Some(m), None) => (AmplenessTarget::line_bundle(*m, field), Vec::new()),
                (None, Some(path)) => AmpleInput::parse(&read_file(path)?)?.resolve(field)?,
                _ => return Err(Failure::Input("give exactly one of --m and --input".into())),
            };
            let report = very_ampleness_order(&target, *p_max, strategy)?;
            let mut text = ample_text(&report);
            let mut evaluations = Vec::new();
            for (i, xi) in jets.iter().enumerate() {
                let sections = match &target {
                    AmplenessTarget::Line { sections }
                    | AmplenessTarget::PointSet { sections, .. }
                    | AmplenessTarget::Projective { sections } => sections,
                };
                let ev = evaluation_map(sections, xi)?;
                let _ = writeln!(text, "jet {i}: rank {} of length {}{}", ev.rank, ev.length, if ev.surjective { ", surjective" } else { "" });
                evaluations.push(json!({"length": ev.length, "rank": ev.rank, "surjective": ev.surjective}));
            }
            Ok(Output::new(json!({"report": report, "jets": evaluations}), text))
        }
        Command::CurveBound { g, d, b, p, h0b } => curve_bound(*g, *d, *b, *p, h0b.unwrap_or((b + 1 - g).max(0))),
        Command::Polygraph { n, k, j, max_degree } => {
            let limits = PolygraphLimits { max_generator_degree: *max_degree, ..PolygraphLimits::default() };
            let spec = PolygraphSpec::with_limits(*n, *k, field, &limits)?;
            let opts = job.gb_options();
            let ideal = polygraph_ideal(&spec, &opts)?;
            let pres = s_module_presentation(&spec, &ideal, &limits, &opts)?;
            let res = pres.minimal_resolution(&opts)?;
            let report = ext_report(&pres, &res, j.unwrap_or(k + 1), &opts)?;
            if !report.is_consistent() {
                return Err(Failure::Internal("verdict disagrees with the computed dimensions".into()));
            }
            Ok(Output::new(json!(report), report.summary()))
        }
        Command::Report { n, p, vanishing } => {
            let a = effective_bound_report(*n, *p)?;
            let gon = gonality_bound_report(*n, *p, *vanishing);
            let text = format!("effective bound: d ≥ {}\n{}\ngonality: {}\n", a.d, a.hypotheses, gon.statement);
            Ok(Output::new(json!({"effective_bound": a, "gonality": gon}), text))
        }
        Command::Verify { level } => {
            let report = verify::suite(*level, job.seed, &job.gb_options())?;
            let mut out = Output::new(json!(report), report.to_text());
            out.csv = Some(report.to_csv());
            if !report.passed {
                out.exit_code = 3;
            }
            Ok(out)
        }
    }
}

fn ring_json(ring: &RingRef) -> Value {
    let order = match ring.order() {
        MonomialOrder::Grevlex => "grevlex".to_string(),
        MonomialOrder::Lex => "lex".to_string(),
        MonomialOrder::Block { split } => format!("block:{split}"),
    };
    let field = match ring.field() {
        Field::Rationals => "qq".to_string(),
        Field::Prime(p) => format!("fp:{p}"),
    };
    json!({"vars": ring.names(), "order": order, "field": field})
}

fn basis_output(ring: &RingRef, ideal: &IdealBasis) -> Output {
    let gens: Vec<String> = ideal.generators().iter().map(ToString::to_string).collect();
    let text = if gens.is_empty() { "(zero ideal)".to_string() } else { gens.join("\n") };
    Output::new(json!({"ring": ring_json(ring), "basis": gens}), text)
}

fn gb(job: &JobSpec, args: &IdealArgs) -> Result<Output, Failure> {
    let (ring, ideals) = read_ideals(args, job.order.0, job.field())?;
    let gens = ideals.into_iter().flat_map(|i| i.generators().to_vec()).collect();
    let gb = IdealBasis::new(&ring, gens)?.groebner_with(&job.gb_options())?;
    Ok(basis_output(&ring, &gb))
}

fn eliminate(job: &JobSpec, args: &IdealArgs, drop: &[String]) -> Result<Output, Failure> {
    let (ring, ideals) = read_ideals(args, job.order.0, job.field())?;
    for v in drop {
        if ring.var_index(v).is_none() {
            return Err(Failure::Input(format!("unknown variable `{v}`")));
        }
    }
    let keep: Vec<usize> = (0..ring.nvars()).filter(|&i| !drop.contains(&ring.names()[i])).collect();
    let gens = ideals.into_iter().flat_map(|i| i.generators().to_vec()).collect();
    let out = IdealBasis::new(&ring, gens)?.eliminate_with(&keep, &job.gb_options())?;
    Ok(basis_output(&ring, &out))
}

fn intersect(job: &JobSpec, args: &IdealArgs) -> Result<Output, Failure> {
    let (ring, ideals) = read_ideals(args, job.order.0, job.field())?;
    if ideals.len() < 2 {
        return Err(Failure::Input("intersect needs at least two ideals".into()));
    }
    Ok(basis_output(&ring, &intersect_ideals(&ideals, &job.gb_options())?))
}

fn table_output(table: &BettiTable) -> Output {
    let value = json!({"entries": table.to_entries(), "projective_dimension": table.projective_dimension()});
    Output::new(value, table.to_string()).with_csv(table.to_csv())
}

fn koszul_output<A: GradedAction>(act: &A, p: Option<usize>, q: Option<i64>, range: (usize, i64, i64)) -> Result<Output, Failure> {
    match (p, q) {
        (Some(p), Some(q)) => {
            let dim = koszul_cohomology_dim(act, p, q);
            Ok(Output::new(json!({"p": p, "q": q, "dimension": dim}), dim.to_string())
                .with_csv(format!("p,q,value\n{p},{q},{dim}\n")))
        }
        (None, None) => Ok(table_output(&koszul_table(act, range.0, range.1, range.2))),
        _ => Err(Failure::Input("--p and --q go together".into())),
    }
}

fn ample_text(report: &AmplenessReport) -> String {
    let mut text = String::new();
    for c in &report.checks {
        let status = match (c.passed, c.schemes_checked) {
            (true, 0) => "vacuous",
            (true, _) => "surjective",
            (false, _) => "fails",
        };
        let _ = write!(text, "p = {}: {status} ({} schemes checked)", c.p, c.schemes_checked);
        if let Some(w) = &c.witness {
            let _ = write!(text, ", witness {w}");
        }
        text.push('\n');
    }
    let evidence = match report.evidence {
        Evidence::Proved => "proved",
        Evidence::Sampled => "sampled",
    };
    match report.order {
        Some(o) => {
            let _ = writeln!(text, "very ampleness order {o} ({evidence})");
        }
        None => {
            let _ = writeln!(text, "not 0-very ample ({evidence})");
        }
    }
    text
}

/// Largest Koszul space worth computing for a direct cross-check.
const DIRECT_CHECK_LIMIT: u128 = 40_000;

fn wedge_size(n: i64, k: i64) -> u128 {
    if k < 0 || k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn curve_bound(g: i64, d: i64, b: i64, p: i64, h0b: i64) -> Result<Output, Failure> {
    let c = CurveNumerics::new(g, d, b, p, h0b)?;
    // on the line the group can be computed, which settles every branch
    let direct = (g == 0 && d >= 1 && wedge_size(d + 1, p) * (b + d + 1).max(0) as u128 <= DIRECT_CHECK_LIMIT)
        .then(|| koszul_of_sections(b, d, p as usize, 1))
        .transpose()?;
    let mut value = json!({"numerics": c, "direct_dimension": direct});
    let mut text = String::new();
    if h0b > p {
        value["verdict"] = json!("not-numerically-certifiable");
        let _ = write!(text, "h⁰(B) = {h0b} > p = {p}: no numerical certificate");
    } else {
        let crit = curve_nonvanishing_criterion(&c)?;
        match &crit.verdict {
            CriterionVerdict::Certified => {
                let _ = write!(text, "K_{{{p},1}} ≠ 0 certified: {} < χ = {}", crit.lhs.as_deref().unwrap_or("?"), crit.chi_rr.as_deref().unwrap_or("?"));
            }
            CriterionVerdict::NotCertified { reason } => {
                let _ = write!(text, "not certified: {reason}");
            }
        }
        if let Some(cp) = &crit.chi_closed_form {
            let _ = write!(text, "\nclosed form C(d−g, p)·(d + b − p·d/(d−g)) gives {cp}");
        }
        if d >= 2 * g + 1 {
            value["chi_difference"] = json!(chi_discrepancy(&c)?.to_string());
        }
        value["verdict"] = json!(crit.verdict);
        value["criterion"] = json!(crit);
    }
    if d >= 2 * g + 1 {
        let (rank, degree) = kernel_bundle_numerics(g, d)?;
        value["kernel_bundle"] = json!({"rank": rank, "degree": degree});
    }
    if let Some(k) = direct {
        let _ = write!(text, "\ndirect computation on the line: dim K_{{{p},1}} = {k}");
    }
    Ok(Output::new(value, text))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    fn run(args: &[&str]) -> Result<Output, Failure> {
        let mut full = vec!["syzcalc"];
        full.extend_from_slice(args);
        execute(&JobSpec::try_parse_from(full).unwrap())
    }

    #[test]
    fn koszul_of_the_twisted_cubic() {
        assert_eq!(run(&["koszul", "--b", "0", "--d", "3", "--p", "1", "--q", "1"]).unwrap().text, "3");
        assert!(matches!(run(&["koszul", "--b", "0", "--p", "1", "--q", "1"]), Err(Failure::Input(_))));
    }

    #[test]
    fn betti_of_the_residue_field() {
        let out = run(&["betti", "--vars", "x,y", "--ideal", "x, y"]).unwrap();
        assert_eq!(out.csv.unwrap(), "p,q,value\n0,0,1\n1,0,2\n2,0,1\n");
    }

    #[test]
    fn groebner_and_elimination() {
        let out = run(&["gb", "--vars", "x,y", "--ideal", "x^2 - y, x*y"]).unwrap();
        assert_eq!(out.json["basis"].as_array().unwrap().len(), 3);
        let out = run(&["eliminate", "--vars", "t,x,y", "--ideal", "x - t^2, y - t^3", "--drop", "t"]).unwrap();
        assert_eq!(out.json["basis"], json!(["x^3 - y^2"]));
        assert!(matches!(run(&["eliminate", "--vars", "x", "--ideal", "x", "--drop", "w"]), Err(Failure::Input(_))));
        let out = run(&["intersect", "--vars", "x,y", "--ideal", "x", "--ideal", "y"]).unwrap();
        assert_eq!(out.json["basis"], json!(["x*y"]));
    }

    #[test]
    fn polygraph_guard() {
        let out = run(&["polygraph", "--n", "1", "--k", "2"]).unwrap();
        assert_eq!(out.json["verdict"]["kind"], "ext-zero");
        assert!(matches!(run(&["polygraph", "--n", "4", "--k", "1"]), Err(Failure::Guard(_))));
    }

    #[test]
    fn curve_branches() {
        let out = run(&["curve-bound", "--g", "0", "--d", "3", "--b", "0", "--p", "1"]).unwrap();
        assert_eq!(out.json["verdict"]["verdict"], "certified");
        assert_eq!(out.json["direct_dimension"], 3);
        assert_eq!(out.json["chi_difference"], "3");
        let out = run(&["curve-bound", "--g", "0", "--d", "4", "--b", "2", "--p", "1"]).unwrap();
        assert_eq!(out.json["verdict"], "not-numerically-certifiable");
        assert_eq!(out.json["direct_dimension"], 0);
    }
}
