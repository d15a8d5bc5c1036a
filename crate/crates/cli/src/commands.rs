use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use orbitlab::actions::{
    growth_profile, is_t_dense, lemma_equivalence_check, restriction_fullness_witness, same_orbits,
    FullnessWitness, LemmaReport,
};
use orbitlab::categories::{closed_form_count, compose, factorize, hom_set};
use orbitlab::modlab::{
    chain_experiment, fi_power_sum_chain, oi_example_chain, parse_element_file,
    restriction_decomposition_check, ChainConfig, Field, MonomialOrder, PresheafElement,
};
use orbitlab::orbitcat::phi_iso_report;
use orbitlab::structures::{
    age_has_sap, parse_embedding_file, solve_amalgamation, Age, AmalgamationProblem, EmbeddingFile,
    KindAge, PairAge,
};
use orbitlab::{CategoryKind, FiniteAction, InjectionMorphism, OrbitMode};

use crate::report::{self, Failure, Output};
use crate::{Command, ExperimentConfig, Format};

/// Number of steps of the built-in FI power-sum chain.
const FI_EXAMPLE_STEPS: usize = 4;
/// Random subgroups drawn when `--subgroup` is absent.
const DEFAULT_SWEEP: usize = 20;

type Run = Result<Output, Failure>;

pub fn run(config: &ExperimentConfig) -> Run {
    match &config.subcommand {
        Command::Homset => homset(config),
        Command::Factorize { morphism } => factorize_cmd(config, morphism.as_deref()),
        Command::Growth => growth(config),
        Command::SameOrbits => same_orbits_cmd(config),
        Command::Dense => dense(config),
        Command::FullnessWitness => fullness(config),
        Command::Amalgamate { left, right, weak } => amalgamate(config, left, right, *weak),
        Command::Sap => sap(config),
        Command::Orbitcat => orbitcat(config),
        Command::NoethChain { example } => noeth_chain(config, example.as_deref()),
        Command::RestrictCheck => restrict_check(config),
    }
}

fn require<T: Copy>(value: Option<T>, flag: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Malformed(format!("--{flag} is required")))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Malformed(format!("cannot read {}: {e}", path.display())))
}

fn group_flag(path: Option<&Path>, flag: &str) -> Result<FiniteAction, Failure> {
    let path = path.ok_or_else(|| Failure::Malformed(format!("--{flag} is required")))?;
    Ok(FiniteAction::parse_group_file(&read(path)?)?)
}

fn group(config: &ExperimentConfig) -> Result<FiniteAction, Failure> {
    group_flag(config.options.group.as_deref(), "group")
}

fn kind(config: &ExperimentConfig) -> Result<CategoryKind, Failure> {
    let text = config
        .options
        .kind
        .as_deref()
        .ok_or_else(|| Failure::Malformed("--kind is required".into()))?;
    Ok(text.parse()?)
}

fn json_only<T: Serialize>(config: &ExperimentConfig, result: &T, violated: bool) -> Run {
    report::render(config, result, violated, None, &[Format::Json])
}

fn homset(config: &ExperimentConfig) -> Run {
    #[derive(Serialize)]
    struct HomsetResult {
        kind: CategoryKind,
        m: usize,
        n: usize,
        count: usize,
        closed_form: String,
        morphisms: Vec<String>,
    }
    let kind = kind(config)?;
    let m = require(config.options.m, "m")?;
    let n = require(config.options.n, "n")?;
    let homs = hom_set(kind, m, n)?;
    let expected = closed_form_count(kind, m, n);
    let result = HomsetResult {
        kind,
        m,
        n,
        count: homs.len(),
        closed_form: expected.to_string(),
        morphisms: homs.iter().map(ToString::to_string).collect(),
    };
    json_only(config, &result, homs.len() as u128 != expected)
}

#[derive(Serialize)]
struct FactorRow {
    morphism: String,
    increasing: String,
    automorphism: String,
}

fn factor_row(f: &InjectionMorphism) -> Result<(FactorRow, bool), Failure> {
    let fac = factorize(f)?;
    let recomposed = compose(&fac.automorphism, &fac.increasing)?;
    let row = FactorRow {
        morphism: f.to_string(),
        increasing: fac.increasing.to_string(),
        automorphism: fac.automorphism.to_string(),
    };
    Ok((row, recomposed == *f && fac.increasing.is_increasing()))
}

fn factorize_cmd(config: &ExperimentConfig, morphism: Option<&str>) -> Run {
    #[derive(Serialize)]
    struct FactorizeResult {
        factorizations: Vec<FactorRow>,
        /// Pairs (increasing, automorphism) counted against the hom-set.
        pairs: Option<usize>,
        bijective: bool,
    }
    if let Some(text) = morphism {
        let f: InjectionMorphism = text.parse()?;
        let (row, ok) = factor_row(&f)?;
        let result = FactorizeResult {
            factorizations: vec![row],
            pairs: None,
            bijective: ok,
        };
        return json_only(config, &result, !ok);
    }
    let kind = kind(config)?;
    let m = require(config.options.m, "m")?;
    let n = require(config.options.n, "n")?;
    let homs = hom_set(kind, m, n)?;
    let pairs = hom_set(CategoryKind::Oi, m, n)?.len() * hom_set(kind, m, m)?.len();
    let mut rows = Vec::new();
    let mut all_ok = pairs == homs.len();
    for f in &homs {
        let (row, ok) = factor_row(f)?;
        all_ok &= ok;
        rows.push(row);
    }
    let result = FactorizeResult {
        factorizations: rows,
        pairs: Some(pairs),
        bijective: all_ok,
    };
    json_only(config, &result, !all_ok)
}

fn growth(config: &ExperimentConfig) -> Run {
    #[derive(Serialize)]
    struct GrowthResult {
        degree: usize,
        profile: orbitlab::actions::GrowthProfile,
        violations: Vec<String>,
    }
    let g = group(config)?;
    let max_n = require(config.options.max_n, "max-n")?;
    let profile = growth_profile(&g, max_n)?;
    let violations = profile.violations(g.degree());
    let tsv = profile.to_tsv();
    let mut body = tsv.clone();
    for v in &violations {
        body.push_str(&format!("# violation: {v}\n"));
    }
    let violated = !violations.is_empty();
    let result = GrowthResult {
        degree: g.degree(),
        profile,
        violations,
    };
    report::render(
        config,
        &result,
        violated,
        Some(&|| body.clone()),
        &[Format::Json, Format::Tsv],
    )
}

/// The given subgroup, or a seeded sample of random subgroups of `g`, each
/// generated by one or two random elements.
fn subgroups(config: &ExperimentConfig, g: &FiniteAction) -> Result<Vec<FiniteAction>, Failure> {
    if let Some(path) = config.options.subgroup.as_deref() {
        return Ok(vec![group_flag(Some(path), "subgroup")?]);
    }
    let count = config.options.cap.unwrap_or(DEFAULT_SWEEP);
    let elements = g.elements()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.options.seed);
    (0..count)
        .map(|_| {
            let gens = (0..rng.gen_range(1..=2))
                .map(|_| elements[rng.gen_range(0..elements.len())].clone())
                .collect();
            Ok(FiniteAction::new(g.degree(), gens)?)
        })
        .collect()
}

fn generator_strings(h: &FiniteAction) -> Vec<String> {
    h.generators().iter().map(|p| p.cycle_string()).collect()
}

fn same_orbits_cmd(config: &ExperimentConfig) -> Run {
    #[derive(Serialize)]
    struct Row {
        subgroup: Vec<String>,
        lemma: LemmaReport,
    }
    let g = group(config)?;
    let n = require(config.options.n, "n")?;
    let mut rows = Vec::new();
    for h in subgroups(config, &g)? {
        let lemma = lemma_equivalence_check(&g, &h, n)?;
        rows.push(Row {
            subgroup: generator_strings(&h),
            lemma,
        });
    }
    let violated = rows.iter().any(|r| !r.lemma.consistent);
    json_only(config, &rows, violated)
}

fn dense(config: &ExperimentConfig) -> Run {
    #[derive(Serialize)]
    struct Row {
        subgroup: Vec<String>,
        t_dense: bool,
        same_injective_orbits: bool,
        agree: bool,
    }
    let g = group(config)?;
    let t = require(config.options.n, "n")?;
    let mut rows = Vec::new();
    for h in subgroups(config, &g)? {
        let t_dense = is_t_dense(&h, &g, t)?;
        let same = same_orbits(&g, &h, t, OrbitMode::Injective)?;
        rows.push(Row {
            subgroup: generator_strings(&h),
            t_dense,
            same_injective_orbits: same,
            agree: t_dense == same,
        });
    }
    let violated = rows.iter().any(|r| !r.agree);
    json_only(config, &rows, violated)
}

fn fullness(config: &ExperimentConfig) -> Run {
    #[derive(Serialize)]
    struct FullnessResult {
        /// `HK = G`, so the indicator map is `G`-equivariant.
        full: bool,
        witness: Option<FullnessWitness>,
    }
    let g = group(config)?;
    let h = group_flag(config.options.subgroup.as_deref(), "subgroup")?;
    let k = group_flag(config.options.k_group.as_deref(), "k-group")?;
    let witness = restriction_fullness_witness(&g, &h, &k)?;
    let result = FullnessResult {
        full: witness.is_none(),
        witness,
    };
    json_only(config, &result, false)
}

fn age(config: &ExperimentConfig) -> Result<Box<dyn Age>, Failure> {
    let text = config
        .options
        .kind
        .as_deref()
        .ok_or_else(|| Failure::Malformed("--kind is required".into()))?;
    if matches!(text.trim().to_ascii_lowercase().as_str(), "pair" | "pairs") {
        return Ok(Box::new(PairAge));
    }
    Ok(Box::new(KindAge(text.parse()?)))
}

fn amalgamate(config: &ExperimentConfig, left: &Path, right: &Path, weak: bool) -> Run {
    #[derive(Serialize)]
    struct AmalgamResult {
        age: String,
        strong: bool,
        amalgam: Option<orbitlab::structures::Amalgam>,
    }
    let age = age(config)?;
    let e1 = parse_embedding_file(&read(left)?)?;
    let e2 = parse_embedding_file(&read(right)?)?;
    if e1.source != e2.source {
        return Err(Failure::Malformed(
            "the two embedding files must share the same source structure".into(),
        ));
    }
    let problem = AmalgamationProblem::new(e1.source, e1.target, e2.target, e1.map, e2.map, &*age)?;
    let amalgam = solve_amalgamation(&problem, &*age, !weak)?;
    let body = match &amalgam {
        None => "NONE\n".to_string(),
        Some(a) => {
            let g1 = EmbeddingFile {
                source: problem.gamma1.clone(),
                target: a.delta.clone(),
                map: a.g1.clone(),
            };
            let g2 = EmbeddingFile {
                source: problem.gamma2.clone(),
                target: a.delta.clone(),
                map: a.g2.clone(),
            };
            format!("{}\n[g1]\n{}\n[g2]\n{}", a.delta, maps(&g1), maps(&g2))
        }
    };
    let violated = amalgam.is_none();
    let result = AmalgamResult {
        age: age.name(),
        strong: !weak,
        amalgam,
    };
    report::render(
        config,
        &result,
        violated,
        Some(&|| body.clone()),
        &[Format::Json, Format::Text],
    )
}

fn maps(e: &EmbeddingFile) -> String {
    e.map
        .iter()
        .enumerate()
        .map(|(x, &y)| format!("{} -> {}\n", e.source.labels()[x], e.target.labels()[y]))
        .collect()
}

fn sap(config: &ExperimentConfig) -> Run {
    let age = age(config)?;
    let cap = require(config.options.cap, "cap")?;
    let result = age_has_sap(&*age, cap)?;
    let mut body = format!("{}\n", result.holds);
    if let Some(p) = &result.counterexample {
        for (name, target, map) in [("f1", &p.gamma1, &p.f1), ("f2", &p.gamma2, &p.f2)] {
            let e = EmbeddingFile {
                source: p.sigma.clone(),
                target: target.clone(),
                map: map.clone(),
            };
            body.push_str(&format!("# counterexample {name}:\n"));
            for line in e.to_string().lines() {
                body.push_str(&format!("#   {line}\n"));
            }
        }
    }
    report::render(
        config,
        &result,
        !result.holds,
        Some(&|| body.clone()),
        &[Format::Json, Format::Text],
    )
}

fn orbitcat(config: &ExperimentConfig) -> Run {
    let g = group(config)?;
    let cap = require(config.options.cap, "cap")?;
    let result = phi_iso_report(&g, cap)?;
    json_only(config, &result, !result.failures_explained)
}

fn modlab_settings(config: &ExperimentConfig) -> Result<(Field, MonomialOrder), Failure> {
    Ok((config.options.field.parse()?, config.options.order.parse()?))
}

fn noeth_chain(config: &ExperimentConfig, example: Option<&str>) -> Run {
    let width = require(config.options.width, "width")?;
    let degree = require(config.options.degree, "degree")?;
    let (field, order) = modlab_settings(config)?;
    let chain: Vec<Vec<PresheafElement>> = match (example, config.options.input.as_deref()) {
        (Some(_), Some(_)) => {
            return Err(Failure::Malformed(
                "give either --example or --input".into(),
            ))
        }
        (Some("oi"), None) => oi_example_chain(field),
        (Some("fi"), None) => fi_power_sum_chain(field, FI_EXAMPLE_STEPS),
        (Some(other), None) => {
            return Err(Failure::Malformed(format!(
                "unknown example `{other}`, expected oi or fi"
            )))
        }
        (None, Some(path)) => {
            orbitlab::modlab::cumulative(&parse_element_file(&read(path)?, field)?)
        }
        (None, None) => {
            return Err(Failure::Malformed(
                "--input or --example is required".into(),
            ))
        }
    };
    let first = chain
        .iter()
        .flatten()
        .next()
        .ok_or_else(|| Failure::Malformed("the chain has no generators".into()))?;
    let (kind_found, n_found) = (first.kind(), first.n());
    if chain
        .iter()
        .flatten()
        .any(|e| (e.kind(), e.n()) != (kind_found, n_found))
    {
        return Err(Failure::Malformed(
            "all generators must share kind and n".into(),
        ));
    }
    if config.options.kind.is_some() && kind(config)? != kind_found {
        return Err(Failure::Malformed(format!(
            "--kind disagrees with the chain ({kind_found})"
        )));
    }
    if config.options.n.is_some_and(|n| n != n_found) {
        return Err(Failure::Malformed(format!(
            "--n disagrees with the chain (n = {n_found})"
        )));
    }
    let report = chain_experiment(
        kind_found,
        n_found,
        &chain,
        ChainConfig {
            max_width: width,
            degree_cap: degree,
            order,
        },
    )?;
    let violated = !report.components_monotone || !report.all_stabilized;
    json_only(config, &report, violated)
}

fn restrict_check(config: &ExperimentConfig) -> Run {
    let kind = kind(config)?;
    let n = require(config.options.n, "n")?;
    let s = require(config.options.width, "width")?;
    let report = restriction_decomposition_check(kind, n, s)?;
    json_only(config, &report, !report.holds)
}
