//! Reading ideals, modules and ampleness targets.

use std::fs;
use std::path::Path;

use serde::Deserialize;
use syzcalc::geometry::AmplenessTarget;
use syzcalc::geometry::SchemeIdeal;
use syzcalc::gradedmod::{GradedModule, ModuleDescription};
use syzcalc::groebner::IdealBasis;
use syzcalc::scalar::parse_rational;
use syzcalc::{Field, MonomialOrder, Ring, RingRef, Scalar};

use crate::job::{IdealArgs, ModuleArgs};
use crate::Failure;

pub fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

pub fn make_ring(vars: &[String], order: MonomialOrder, field: Field) -> Result<RingRef, Failure> {
    if vars.is_empty() {
        return Err(Failure::Input("no variables given (use --vars or a `vars:` line)".into()));
    }
    Ok(Ring::new(vars.to_vec(), vec![1; vars.len()], order, field)?)
}

fn split_generators(s: &str) -> Vec<String> {
    s.split(',').map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect()
}

/// Every ideal named by `args`, in one common ring: each file is one
/// ideal, and so is each `--ideal` list.
pub fn read_ideals(args: &IdealArgs, order: MonomialOrder, field: Field) -> Result<(RingRef, Vec<IdealBasis>), Failure> {
    let mut sources: Vec<(Vec<String>, Vec<String>)> = Vec::new();
    for path in &args.input {
        let desc = ModuleDescription::parse_text(&read_file(path)?)?;
        if desc.shifts.len() != 1 {
            return Err(Failure::Input(format!("{}: an ideal file has a single generator", path.display())));
        }
        sources.push((desc.vars, desc.relations.into_iter().flatten().collect()));
    }
    for list in &args.ideal {
        sources.push((args.vars.clone(), split_generators(list)));
    }
    let vars = match sources.first() {
        Some((v, _)) => v.clone(),
        None => return Err(Failure::Input("no ideal given (use --ideal or --input)".into())),
    };
    if let Some((v, _)) = sources.iter().find(|(v, _)| *v != vars) {
        return Err(Failure::Input(format!("ideals live in different rings: [{}] vs [{}]", vars.join(", "), v.join(", "))));
    }
    let ring = make_ring(&vars, order, field)?;
    let ideals = sources
        .iter()
        .map(|(_, gens)| {
            let refs: Vec<&str> = gens.iter().map(String::as_str).collect();
            IdealBasis::parse(&ring, &refs).map_err(Failure::from)
        })
        .collect::<Result<_, _>>()?;
    Ok((ring, ideals))
}

pub fn read_description(path: &Path) -> Result<ModuleDescription, Failure> {
    let src = read_file(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        serde_json::from_str(&src).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    } else {
        Ok(ModuleDescription::parse_text(&src)?)
    }
}

pub fn read_module(args: &ModuleArgs, field: Field) -> Result<GradedModule, Failure> {
    match (&args.file, &args.ideal) {
        (Some(path), None) => Ok(read_description(path)?.build(field)?),
        (None, Some(gens)) => {
            let ring = make_ring(&args.vars, MonomialOrder::Grevlex, field)?;
            let gens = split_generators(gens);
            let refs: Vec<&str> = gens.iter().map(String::as_str).collect();
            Ok(GradedModule::quotient(&IdealBasis::parse(&ring, &refs)?)?)
        }
        (Some(_), Some(_)) => Err(Failure::Input("give either a module file or --ideal, not both".into())),
        (None, None) => Err(Failure::Input("no module given (a file argument or --vars with --ideal)".into())),
    }
}

/// JSON input of `ample`: sections (explicit, or all forms of `degree`),
/// optional points, and optional jets to evaluate on.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmpleInput {
    pub vars: Vec<String>,
    #[serde(default)]
    pub sections: Vec<String>,
    pub degree: Option<u32>,
    pub points: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub jets: Vec<JetInput>,
}

/// A germ `ε ↦ series[i][m] ε^m` cut by `ε^length`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JetInput {
    pub series: Vec<Vec<String>>,
    pub length: usize,
}

fn scalar(field: Field, s: &str) -> Result<Scalar, Failure> {
    let q = parse_rational(s).ok_or_else(|| Failure::Input(format!("`{s}` is not a rational number")))?;
    Ok(field.from_rational(&q)?)
}

fn scalars(field: Field, v: &[String]) -> Result<Vec<Scalar>, Failure> {
    v.iter().map(|s| scalar(field, s)).collect()
}

impl AmpleInput {
    pub fn parse(src: &str) -> Result<Self, Failure> {
        serde_json::from_str(src).map_err(|e| Failure::Input(format!("ample input: {e}")))
    }

    /// The target and the explicit jets.
    pub fn resolve(&self, field: Field) -> Result<(AmplenessTarget, Vec<SchemeIdeal>), Failure> {
        let ring = make_ring(&self.vars, MonomialOrder::Grevlex, field)?;
        let mut sections = self
            .sections
            .iter()
            .map(|s| ring.parse(s).map_err(Failure::from))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(deg) = self.degree {
            sections.extend(
                ring.monomials_of_degree(deg)
                    .into_iter()
                    .map(|m| syzcalc::MultiPoly::term(&ring, m, field.one())),
            );
        }
        if sections.is_empty() {
            return Err(Failure::Input("ample input needs `sections` or `degree`".into()));
        }
        let jets = self
            .jets
            .iter()
            .map(|j| {
                let series = j.series.iter().map(|c| scalars(field, c)).collect::<Result<_, _>>()?;
                Ok(SchemeIdeal::Jet { series, length: j.length })
            })
            .collect::<Result<Vec<_>, Failure>>()?;
        let target = match &self.points {
            Some(points) => AmplenessTarget::PointSet {
                points: points.iter().map(|p| scalars(field, p)).collect::<Result<_, _>>()?,
                sections,
            },
            None if self.vars.len() == 2 => AmplenessTarget::Line { sections },
            None => AmplenessTarget::Projective { sections },
        };
        Ok((target, jets))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ideals_share_a_ring() {
        let args = IdealArgs {
            vars: vec!["x".into(), "y".into()],
            ideal: vec!["x^2, y".into(), "x*y".into()],
            input: Vec::new(),
        };
        let (ring, ideals) = read_ideals(&args, MonomialOrder::Grevlex, Field::Rationals).unwrap();
        assert_eq!(ring.nvars(), 2);
        assert_eq!(ideals.len(), 2);
        assert_eq!(ideals[0].generators().len(), 2);
        let none = IdealArgs::default();
        assert!(matches!(read_ideals(&none, MonomialOrder::Grevlex, Field::Rationals), Err(Failure::Input(_))));
    }

    #[test]
    fn bad_polynomials_are_input_errors() {
        let args = IdealArgs { vars: vec!["x".into()], ideal: vec!["x^".into()], input: Vec::new() };
        assert!(matches!(read_ideals(&args, MonomialOrder::Grevlex, Field::Rationals), Err(Failure::Input(_))));
        let args = ModuleArgs { file: None, vars: vec!["x".into()], ideal: Some("q".into()) };
        assert!(matches!(read_module(&args, Field::Rationals), Err(Failure::Input(_))));
    }

    #[test]
    fn ample_json() {
        let src = r#"{"vars": ["x0", "x1", "x2"], "degree": 2, "points": [["1", "0", "0"], ["0", "1/2", "0"]],
                      "jets": [{"series": [["1", "0"], ["0", "1"], ["0", "0"]], "length": 2}]}"#;
        let (target, jets) = AmpleInput::parse(src).unwrap().resolve(Field::Rationals).unwrap();
        assert!(matches!(target, AmplenessTarget::PointSet { ref points, ref sections } if points.len() == 2 && sections.len() == 6));
        assert_eq!(jets.len(), 1);
        assert!(AmpleInput::parse(r#"{"vars": ["s"], "colour": 1}"#).is_err());
        let line = AmpleInput::parse(r#"{"vars": ["s", "t"], "sections": ["s^2", "t^2"]}"#).unwrap();
        assert!(matches!(line.resolve(Field::Rationals).unwrap().0, AmplenessTarget::Line { .. }));
    }
}
