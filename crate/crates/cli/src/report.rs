//! The `analyze` report.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::Serialize;
use serde_json::Value;
use semisym::graphalg::{self, AutOptions, AutReport, GeometricOrder};
use semisym::pg::StabilizerOptions;
use semisym::pointsets::Family;
use semisym::{setanalysis, IncidenceGraph, PointSet};

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Formula,
    Oracle,
    Engine,
}

#[derive(Clone, Debug, Serialize)]
pub struct Tagged<T> {
    pub value: T,
    pub source: Source,
}

fn engine<T>(value: T) -> Tagged<T> {
    Tagged { value, source: Source::Engine }
}

#[derive(Debug, Serialize)]
pub struct Parameters {
    pub input: String,
    pub family: String,
    pub n: usize,
    pub q: u32,
    pub k_size: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct SetAnalysis {
    pub span_dim: Tagged<isize>,
    pub is_arc: Tagged<bool>,
    pub is_cap: Tagged<bool>,
    /// Points of H∞ with no tangent line to K.
    pub uncovered: Tagged<Vec<semisym::ProjPoint>>,
    pub closure_size: Tagged<usize>,
    pub closure_is_ambient: Tagged<bool>,
}

#[derive(Debug, Serialize)]
pub struct GraphAnalysis {
    pub vertices: Tagged<usize>,
    pub edges: Tagged<usize>,
    /// None when the graph is not regular.
    pub degree: Tagged<Option<usize>>,
    pub connected: Tagged<bool>,
    pub components: Tagged<usize>,
    pub girth: Tagged<Option<usize>>,
    /// Cycle lengths searched and whether each occurs.
    pub cycles: BTreeMap<usize, Tagged<bool>>,
}

#[derive(Debug, Serialize)]
pub struct Expectation {
    pub check: String,
    pub expected: Value,
    pub computed: Value,
    pub source: Source,
    /// None when the computed side is unavailable.
    pub pass: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct Verdict {
    /// None when the automorphism search did not run.
    pub semisymmetric: Option<bool>,
    pub reasons: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub version: &'static str,
    pub parameters: Parameters,
    pub construction: semisym::GraphMeta,
    pub set_analysis: Option<SetAnalysis>,
    pub graph: GraphAnalysis,
    pub automorphisms: Option<AutReport>,
    pub automorphisms_error: Option<String>,
    pub geometric: Option<GeometricOrder>,
    /// |Aut| / geometric order, when both are known and divisible.
    pub index_over_geometric: Option<Tagged<String>>,
    pub expectations: Vec<Expectation>,
    pub verdict: Verdict,
}

impl RunReport {
    pub fn expectations_failed(&self) -> bool {
        self.expectations.iter().any(|e| e.pass == Some(false))
    }
}

pub struct AnalyzeOptions {
    pub expect: bool,
    pub budget: u128,
    pub ceiling: usize,
    pub generators: bool,
}

/// Recorded [Aut : geometric] values for the basis family.
const BASIS_INDEX: [((usize, u32), u64); 3] = [((2, 3), 1), ((3, 4), 8), ((4, 5), 7776)];

fn set_analysis(k: &PointSet) -> SetAnalysis {
    let r = setanalysis::report(k);
    SetAnalysis {
        span_dim: engine(r.span_dim),
        is_arc: engine(r.is_arc),
        is_cap: engine(r.is_cap),
        uncovered: engine(r.uncovered_points),
        closure_size: engine(r.closure_size),
        closure_is_ambient: engine(r.closure_equals_ambient),
    }
}

fn graph_analysis(ig: &IncidenceGraph) -> anyhow::Result<GraphAnalysis> {
    let g = ig.graph();
    let girth = graphalg::girth(g);
    let mut cycles = BTreeMap::new();
    // 4 and 6 are implied by the girth; 10 separates n = 2 from n >= 3.
    for k in [4, 6, 8, 10] {
        let present = match girth {
            Some(gi) if k < gi => false,
            Some(gi) if k == gi => true,
            None => false,
            _ => graphalg::has_cycle_length(g, k)?,
        };
        cycles.insert(k, engine(present));
    }
    let components = graphalg::connected_components(g).len();
    Ok(GraphAnalysis {
        vertices: engine(g.n()),
        edges: engine(g.num_edges()),
        degree: engine(graphalg::regular_degree(g)),
        connected: engine(components == 1),
        components: engine(components),
        girth: engine(girth),
        cycles,
    })
}

fn expect<T: Serialize, U: Serialize>(
    out: &mut Vec<Expectation>,
    check: &str,
    expected: T,
    computed: Option<U>,
    source: Source,
    pass: impl FnOnce(&U) -> bool,
) {
    let pass_v = computed.as_ref().map(pass);
    out.push(Expectation {
        check: check.into(),
        expected: serde_json::to_value(expected).unwrap_or(Value::Null),
        computed: computed.map(|c| serde_json::to_value(c).unwrap_or(Value::Null)).unwrap_or(Value::Null),
        source,
        pass: pass_v,
    });
}

fn big(v: u128) -> BigUint {
    BigUint::from(v)
}

pub fn analyze(ig: &IncidenceGraph, input: &str, opts: &AnalyzeOptions) -> anyhow::Result<RunReport> {
    let meta = ig.meta().clone();
    let k = ig.point_set().cloned();
    let graph = graph_analysis(ig)?;
    let set = k.as_ref().map(set_analysis);

    let (mut automorphisms, automorphisms_error) = match graphalg::automorphisms(ig, &AutOptions { ceiling: opts.ceiling }) {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let stab = StabilizerOptions { budget: opts.budget, ..StabilizerOptions::default() };
    let geometric = k.as_ref().map(|k| graphalg::geometric_order(k, &stab));

    let geo_order = geometric.as_ref().and_then(|g| g.oracle_geometric);
    let index = match (&automorphisms, geo_order) {
        (Some(a), Some(g)) if g > 0 && (&a.group_order % big(g)) == BigUint::from(0u32) => {
            Some(Tagged { value: (&a.group_order / big(g)).to_string(), source: Source::Oracle })
        }
        _ => None,
    };

    let mut reasons = Vec::new();
    let semisymmetric = automorphisms.as_ref().map(|a| {
        if graph.degree.value.is_none() {
            reasons.push("not regular".to_string());
        }
        if !a.edge_transitive {
            reasons.push(format!("not edge-transitive ({} edge orbits)", a.edge_orbits.count));
        }
        if a.vertex_transitive {
            reasons.push("vertex-transitive".to_string());
        }
        if !graph.connected.value {
            reasons.push(format!("not connected: {} components, K does not span H∞", graph.components.value));
        }
        reasons.is_empty()
    });
    if let Some(e) = &automorphisms_error {
        reasons.push(format!("automorphism search skipped: {e}"));
    }

    let mut expectations = Vec::new();
    if opts.expect {
        if let (Some(k), Some(set)) = (&k, &set) {
            expectations = recorded_expectations(ig, k, set, &graph, automorphisms.as_ref(), geometric.as_ref(), semisymmetric);
        }
    }
    if !opts.generators {
        if let Some(a) = automorphisms.as_mut() {
            a.generators.clear();
            a.swap = None;
        }
    }

    Ok(RunReport {
        schema: REPORT_SCHEMA,
        version: env!("CARGO_PKG_VERSION"),
        parameters: Parameters {
            input: input.to_string(),
            family: meta.family.clone(),
            n: meta.n,
            q: meta.q,
            k_size: k.as_ref().map(|k| k.len()),
        },
        construction: meta,
        set_analysis: set,
        graph,
        automorphisms,
        automorphisms_error,
        geometric,
        index_over_geometric: index,
        expectations,
        verdict: Verdict { semisymmetric, reasons },
    })
}

/// Claims recorded for Γ_{n,q}(K) and its families, checked against the
/// computation.
fn recorded_expectations(
    ig: &IncidenceGraph,
    k: &PointSet,
    set: &SetAnalysis,
    graph: &GraphAnalysis,
    aut: Option<&AutReport>,
    geo: Option<&GeometricOrder>,
    semisymmetric: Option<bool>,
) -> Vec<Expectation> {
    let mut out = Vec::new();
    let (n, q) = (k.n(), k.q() as u64);
    let order = 2 * (q as u128).pow(n as u32 + 1);
    expect(&mut out, "order 2 q^(n+1)", order, Some(ig.graph().n() as u128), Source::Formula, |&c| c == order);
    expect(&mut out, "regular of degree |K|", k.len(), Some(graph.degree.value), Source::Formula, |&c| {
        c == Some(k.len())
    });
    let span = set.span_dim.value;
    let components = (q as u128).pow((n as isize - span).max(0) as u32);
    expect(&mut out, "components q^(n-t), t = dim span K", components, Some(graph.components.value as u128), Source::Formula, |&c| {
        c == components
    });
    if set.is_arc.value && n >= 2 && k.len() as u64 == q {
        expect(&mut out, "girth 8 for arcs", 8, Some(graph.girth.value), Source::Formula, |&c| c == Some(8));
        let c10 = n == 2;
        expect(&mut out, "C10 present iff n = 2", c10, graph.cycles.get(&10).map(|t| t.value), Source::Formula, |&c| c == c10);
    }
    let catalog = !matches!(k.family(), Family::Custom | Family::DualArc);
    // The frame in PG(2,4) lies on a hyperoval and its graph is vertex-transitive.
    let excluded = k.family() == Family::Frame && (n, q) == (2, 4);
    if catalog && !excluded && k.len() as u64 == q {
        expect(&mut out, "semisymmetric", true, semisymmetric, Source::Formula, |&c| c);
    }

    let Some(geo) = geo else { return out };
    let aut_order = aut.map(|a| a.group_order.clone());
    if let (Some(f), Some(o)) = (&geo.formula, geo.oracle_geometric) {
        let label = format!("geometric order {} = {}", f.label, f.expression);
        expect(&mut out, &label, f.value.to_string(), Some(o.to_string()), Source::Oracle, |c| *c == f.value.to_string());
    }
    if !geo.candidates.is_empty() {
        let matching = geo.matching.clone();
        expect(&mut out, "some recorded formula matches the oracle", "non-empty", Some(matching), Source::Oracle, |m| {
            !m.is_empty()
        });
    }
    if !geo.non_geometric_expected {
        if let (Some(f), false) = (&geo.formula, k.family() == Family::Basis || k.family() == Family::Frame) {
            let v = f.value.to_string();
            expect(&mut out, "Aut order equals the geometric formula", &v, aut_order.as_ref().map(|a| a.to_string()), Source::Formula, |c| {
                *c == v
            });
        }
    } else {
        if let Some(g) = geo.oracle_geometric {
            expect(&mut out, "Aut order exceeds the geometric order", format!("> {g}"), aut_order.as_ref().map(|a| a.to_string()), Source::Oracle, |_| {
                aut_order.as_ref().is_some_and(|a| *a > big(g))
            });
        }
        if let Some(b) = &geo.aut_lower_bound {
            let label = format!("Aut order > {}", b.expression);
            expect(&mut out, &label, format!("> {}", b.value), aut_order.as_ref().map(|a| a.to_string()), Source::Formula, |_| {
                aut_order.as_ref().is_some_and(|a| *a > big(b.value))
            });
        }
    }
    if k.family() == Family::Basis {
        if let Some(&(_, idx)) = BASIS_INDEX.iter().find(|(key, _)| *key == (n, q as u32)) {
            let computed = match (&aut_order, geo.oracle_geometric) {
                (Some(a), Some(g)) => Some((a / big(g)).to_string()),
                _ => None,
            };
            expect(&mut out, "[Aut : geometric] for the basis", idx.to_string(), computed, Source::Formula, |c| {
                *c == idx.to_string()
            });
        }
    }
    out
}
