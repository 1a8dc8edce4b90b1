//! Family name + parameters -> point set or incidence graph.

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use semisym::linrep;
use semisym::pointsets::{self, BaerKind};
use semisym::{IncidenceGraph, PointSet, ProjSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum FamilyArg {
    #[value(alias = "nrc_minus_point")]
    Nrc,
    Basis,
    Frame,
    #[value(alias = "cg")]
    CasseGlynn,
    EllipticBaer,
    TitsBaer,
    HyperbolicBaer,
    Cone,
    /// Dual of the Casse-Glynn arc with the same q and σ.
    DualArc,
    /// The bipartite graph Λ_{n,q}; no point set.
    Lambda,
    /// Orbit of (1,0,...,0) under A_φ in PG(n,p).
    Dwz,
    /// Explicit points given with --points.
    Custom,
}

#[derive(Args, Clone, Debug)]
pub struct FamilyParams {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub q: Option<u64>,
    /// Subfield order for cones.
    #[arg(long)]
    pub q0: Option<u64>,
    /// Extension degree for cones (q = q0^h).
    #[arg(long)]
    pub h: Option<u32>,
    /// σ = 2^e for the Casse-Glynn arc.
    #[arg(long = "sigma-exp")]
    pub sigma_exp: Option<u32>,
    /// Points as field-element indices, e.g. "1,0,0;0,1,0": K for the
    /// custom family, the base O in PG(n-1,q0) for cones.
    #[arg(long)]
    pub points: Option<String>,
}

fn need<T: Copy>(v: Option<T>, flag: &str, family: FamilyArg) -> Result<T> {
    v.with_context(|| format!("--{flag} is required for --family {}", family_name(family)))
}

pub fn family_name(f: FamilyArg) -> String {
    f.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
}

fn fixed_n(p: &FamilyParams, n: usize) -> Result<()> {
    match p.n {
        Some(m) if m != n => bail!("--family {} lives in PG({n},q); got --n {m}", family_name(p.family)),
        _ => Ok(()),
    }
}

fn parse_points(text: &str) -> Result<Vec<Vec<u32>>> {
    text.split(';')
        .map(|pt| {
            pt.split(',')
                .map(|c| c.trim().parse::<u32>().with_context(|| format!("bad coordinate {c:?} in --points")))
                .collect()
        })
        .collect()
}

/// The point set K for every family except `lambda`.
pub fn point_set(p: &FamilyParams) -> Result<PointSet> {
    let f = p.family;
    let k = match f {
        FamilyArg::Nrc => pointsets::nrc_minus_point(need(p.n, "n", f)?, need(p.q, "q", f)?)?,
        FamilyArg::Basis => pointsets::basis(need(p.n, "n", f)?, need(p.q, "q", f)?)?,
        FamilyArg::Frame => pointsets::frame(need(p.n, "n", f)?, need(p.q, "q", f)?)?,
        FamilyArg::CasseGlynn | FamilyArg::DualArc => {
            fixed_n(p, 3)?;
            let cg = pointsets::casse_glynn(need(p.q, "q", f)?, need(p.sigma_exp, "sigma-exp", f)?)?;
            if f == FamilyArg::DualArc {
                pointsets::dual_arc(&cg)?
            } else {
                cg
            }
        }
        FamilyArg::EllipticBaer | FamilyArg::TitsBaer | FamilyArg::HyperbolicBaer => {
            fixed_n(p, 3)?;
            let kind = match f {
                FamilyArg::EllipticBaer => BaerKind::Elliptic,
                FamilyArg::TitsBaer => BaerKind::Tits,
                _ => BaerKind::Hyperbolic,
            };
            pointsets::baer_set(kind, need(p.q, "q", f)?)?
        }
        FamilyArg::Cone => {
            let (n, q0, h) = (need(p.n, "n", f)?, need(p.q0, "q0", f)?, need(p.h, "h", f)?);
            if let Some(q) = p.q {
                if Some(q) != q0.checked_pow(h) {
                    bail!("cone needs q = q0^h; got q = {q}, q0 = {q0}, h = {h}");
                }
            }
            let base = p.points.as_deref().map(parse_points).transpose()?;
            pointsets::cone_set(n, q0, h, base.as_deref())?
        }
        FamilyArg::Dwz => linrep::dwz_pointset(need(p.n, "n", f)?, need(p.q, "q", f)?)?,
        FamilyArg::Custom => {
            let space = ProjSpace::over_order(need(p.n, "n", f)?, need(p.q, "q", f)?)?;
            let text = p.points.as_deref().context("--points is required for --family custom")?;
            PointSet::from_ints(&space, &parse_points(text)?)?
        }
        FamilyArg::Lambda => bail!("lambda is a graph, not a point set"),
    };
    Ok(k)
}

pub fn graph(p: &FamilyParams) -> Result<IncidenceGraph> {
    if p.family == FamilyArg::Lambda {
        return Ok(linrep::build_lambda(need(p.n, "n", p.family)?, need(p.q, "q", p.family)?)?);
    }
    Ok(linrep::build_gamma(&point_set(p)?)?)
}
