//! The point sets K fed into the graph construction, in canonical
//! coordinates, plus the dual-arc transform.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{usage, Error, Result};
use crate::gf::{prime_power, Field, FieldElement, FieldSpec};
use crate::linalg::{self, Matrix};
use crate::pg::{self, ProjPoint, ProjSpace};
use crate::setanalysis;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Basis,
    Frame,
    NrcMinusPoint,
    CasseGlynn,
    EllipticBaer,
    TitsBaer,
    HyperbolicBaer,
    Cone,
    DualArc,
    Custom,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::Basis,
        Family::Frame,
        Family::NrcMinusPoint,
        Family::CasseGlynn,
        Family::EllipticBaer,
        Family::TitsBaer,
        Family::HyperbolicBaer,
        Family::Cone,
        Family::DualArc,
        Family::Custom,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Basis => "basis",
            Family::Frame => "frame",
            Family::NrcMinusPoint => "nrc_minus_point",
            Family::CasseGlynn => "casse_glynn",
            Family::EllipticBaer => "elliptic_baer",
            Family::TitsBaer => "tits_baer",
            Family::HyperbolicBaer => "hyperbolic_baer",
            Family::Cone => "cone",
            Family::DualArc => "dual_arc",
            Family::Custom => "custom",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Family> {
        let key = s.to_ascii_lowercase().replace('-', "_");
        let fam = match key.as_str() {
            "nrc" => Family::NrcMinusPoint,
            "elliptic" => Family::EllipticBaer,
            "tits" => Family::TitsBaer,
            "hyperbolic" => Family::HyperbolicBaer,
            "dual" => Family::DualArc,
            other => match Family::ALL.iter().find(|f| f.as_str() == other) {
                Some(&f) => f,
                None => return usage(format!("unknown family '{s}'")),
            },
        };
        Ok(fam)
    }
}

/// A family-tagged set of points of PG(n,q).
#[derive(Clone, Debug)]
pub struct PointSet {
    family: Family,
    space: ProjSpace,
    points: Vec<ProjPoint>,
    meta: BTreeMap<String, Value>,
}

/// Serializable form of a point set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSetData {
    pub family: Family,
    pub n: usize,
    pub field: FieldSpec,
    pub points: Vec<Vec<u32>>,
    #[serde(default)]
    pub meta: BTreeMap<String, Value>,
}

impl PointSet {
    pub fn new(
        family: Family,
        space: &ProjSpace,
        points: Vec<ProjPoint>,
        meta: BTreeMap<String, Value>,
    ) -> Result<PointSet> {
        let mut seen = HashSet::new();
        for p in &points {
            if p.space() != space {
                return usage("point outside the declared ambient space");
            }
            if !seen.insert(p.clone()) {
                return usage(format!("repeated point {p:?}"));
            }
        }
        Ok(PointSet { family, space: space.clone(), points, meta })
    }

    pub fn custom(space: &ProjSpace, points: Vec<ProjPoint>) -> Result<PointSet> {
        PointSet::new(Family::Custom, space, points, BTreeMap::new())
    }

    pub fn from_ints(space: &ProjSpace, coords: &[Vec<u32>]) -> Result<PointSet> {
        let pts = coords.iter().map(|c| space.point_from_ints(c)).collect::<Result<Vec<_>>>()?;
        PointSet::custom(space, pts)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn space(&self) -> &ProjSpace {
        &self.space
    }

    pub fn field(&self) -> &Field {
        self.space.field()
    }

    pub fn n(&self) -> usize {
        self.space.dim()
    }

    pub fn q(&self) -> u32 {
        self.space.q()
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn meta(&self) -> &BTreeMap<String, Value> {
        &self.meta
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.points.contains(p)
    }

    pub fn with_meta(mut self, key: &str, value: Value) -> PointSet {
        self.meta.insert(key.to_string(), value);
        self
    }

    pub fn to_data(&self) -> PointSetData {
        PointSetData {
            family: self.family,
            n: self.n(),
            field: self.field().spec().clone(),
            points: self.points.iter().map(|p| p.coord_ints()).collect(),
            meta: self.meta.clone(),
        }
    }

    pub fn from_data(data: &PointSetData) -> Result<PointSet> {
        let field = Field::new(FieldSpec::with_modulus(data.field.p, data.field.modulus.clone())?);
        let space = ProjSpace::new(data.n, field);
        let pts = data.points.iter().map(|c| space.point_from_ints(c)).collect::<Result<Vec<_>>>()?;
        PointSet::new(data.family, &space, pts, data.meta.clone())
    }
}

fn meta(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn check_q(q: u64) -> Result<(u32, u32)> {
    prime_power(q).ok_or_else(|| Error::Usage(format!("{q} is not a prime power")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameKind {
    Basis,
    Frame,
}

/// The n+1 unit points (basis, q = n+1) or the unit points together with
/// (-1,...,-1) (frame, q = n+2).
pub fn basis_or_frame(kind: FrameKind, n: usize, q: u64) -> Result<PointSet> {
    check_q(q)?;
    let (family, need) = match kind {
        FrameKind::Basis => (Family::Basis, n as u64 + 1),
        FrameKind::Frame => (Family::Frame, n as u64 + 2),
    };
    if q != need || n == 0 {
        return usage(format!("{family} needs q = {need} for n = {n}, got q = {q}"));
    }
    let space = ProjSpace::over_order(n, q)?;
    let f = space.field().clone();
    let mut pts = Vec::new();
    for i in 0..=n {
        let mut v = vec![FieldElement::ZERO; n + 1];
        v[i] = FieldElement::ONE;
        pts.push(space.point(v)?);
    }
    if kind == FrameKind::Frame {
        pts.push(space.point(vec![f.neg(FieldElement::ONE); n + 1])?);
    }
    PointSet::new(family, &space, pts, meta(&[("n", json!(n)), ("q", json!(q))]))
}

pub fn basis(n: usize, q: u64) -> Result<PointSet> {
    basis_or_frame(FrameKind::Basis, n, q)
}

pub fn frame(n: usize, q: u64) -> Result<PointSet> {
    basis_or_frame(FrameKind::Frame, n, q)
}

/// {(1,t,...,t^n) : t in GF(q)}: the normal rational curve without (0,...,0,1).
pub fn nrc_minus_point(n: usize, q: u64) -> Result<PointSet> {
    check_q(q)?;
    if n < 2 || n as u64 > q {
        return usage(format!("nrc_minus_point needs 2 <= n <= q, got n = {n}, q = {q}"));
    }
    let space = ProjSpace::over_order(n, q)?;
    let f = space.field().clone();
    let pts = f
        .elements()
        .map(|t| space.point((0..=n as u64).map(|i| f.pow(t, i)).collect()))
        .collect::<Result<Vec<_>>>()?;
    let mut removed = vec![0u32; n + 1];
    removed[n] = 1;
    PointSet::new(
        Family::NrcMinusPoint,
        &space,
        pts,
        meta(&[("n", json!(n)), ("q", json!(q)), ("removed", json!(removed))]),
    )
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// {(1,x,x^σ,x^(σ+1))} with σ = x -> x^(2^e): the arc C(σ) without (0,0,0,1).
pub fn casse_glynn(q: u64, sigma_exp: u32) -> Result<PointSet> {
    let (p, h) = check_q(q)?;
    if p != 2 || h <= 2 {
        return usage(format!("casse_glynn needs q = 2^h with h > 2, got q = {q}"));
    }
    if sigma_exp == 0 || sigma_exp >= h || gcd(sigma_exp, h) != 1 {
        return usage(format!("x -> x^(2^{sigma_exp}) does not generate Aut(GF({q}))"));
    }
    let space = ProjSpace::over_order(3, q)?;
    let f = space.field().clone();
    let pts = f
        .elements()
        .map(|x| {
            let xs = f.frob(x, sigma_exp);
            space.point(vec![FieldElement::ONE, x, xs, f.mul(x, xs)])
        })
        .collect::<Result<Vec<_>>>()?;
    PointSet::new(
        Family::CasseGlynn,
        &space,
        pts,
        meta(&[("q", json!(q)), ("sigma_exp", json!(sigma_exp)), ("removed", json!([0, 0, 0, 1]))]),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaerKind {
    Elliptic,
    Tits,
    Hyperbolic,
}

/// q points inside the subgeometry PG(3,√q) of PG(3,q).
///
/// Elliptic: the quadric {(1,x,x^r,x^(r+1))} ∪ {(0,0,0,1)} (r = √q) moved by
/// (x0,x1,x2,x3) -> (x0, x1+x2, ωx1+ω^r x2, x3) so it reads
/// (1, Tr x, Tr ωx, N x) with rational coordinates; (0,0,0,1) is removed.
/// Tits: (1,s,t,st+s^(σ+2)+t^σ) for s,t in GF(r).
/// Hyperbolic: X0X3 = X1X2 minus the lines X0=X1=0 and X0=X2=0, leaving
/// (1,a,b,ab) for a,b in GF(r).
pub fn baer_set(kind: BaerKind, q: u64) -> Result<PointSet> {
    let (p, h) = check_q(q)?;
    let family = match kind {
        BaerKind::Elliptic => Family::EllipticBaer,
        BaerKind::Tits => Family::TitsBaer,
        BaerKind::Hyperbolic => Family::HyperbolicBaer,
    };
    match kind {
        BaerKind::Elliptic | BaerKind::Hyperbolic => {
            if h % 2 != 0 || q <= 4 {
                return usage(format!("{family} needs q > 4 a square, got q = {q}"));
            }
        }
        BaerKind::Tits => {
            if p != 2 || h % 2 != 0 || (h / 2) % 2 != 1 || h < 6 {
                return usage(format!("tits_baer needs q = 2^(2(2e+1)) with e >= 1, got q = {q}"));
            }
        }
    }
    let space = ProjSpace::over_order(3, q)?;
    let f = space.field().clone();
    let r = (p as u64).pow(h / 2);
    let sub = f.subfield(h / 2)?;
    let one = FieldElement::ONE;
    let mut pts = Vec::new();
    let mut m = meta(&[("q", json!(q)), ("sqrt_q", json!(r))]);
    match kind {
        BaerKind::Elliptic => {
            let omega = f.primitive_element();
            for x in f.elements() {
                let tr = |y: FieldElement| f.add(y, f.pow(y, r));
                let norm = f.pow(x, r + 1);
                pts.push(space.point(vec![one, tr(x), tr(f.mul(omega, x)), norm])?);
            }
            m.insert("removed".into(), json!([0, 0, 0, 1]));
            m.insert("omega".into(), json!(omega.0));
        }
        BaerKind::Tits => {
            // σ = x -> x^(2^(e+1)) on GF(r), r = 2^(2e+1)
            let e = (h / 2 - 1) / 2;
            let sigma = 2u64.pow(e + 1);
            for &s in &sub {
                for &t in &sub {
                    let s_sig = f.pow(s, sigma);
                    let last = f.add(f.add(f.mul(s, t), f.mul(s_sig, f.mul(s, s))), f.pow(t, sigma));
                    pts.push(space.point(vec![one, s, t, last])?);
                }
            }
            m.insert("removed".into(), json!([0, 0, 0, 1]));
            m.insert("sigma".into(), json!(sigma));
        }
        BaerKind::Hyperbolic => {
            for &a in &sub {
                for &b in &sub {
                    pts.push(space.point(vec![one, a, b, f.mul(a, b)])?);
                }
            }
            m.insert("removed_lines".into(), json!(["X0=X1=0", "X0=X2=0"]));
        }
    }
    PointSet::new(family, &space, pts, m)
}

/// Built-in cone bases, as coordinates in PG(n-1,q0): three collinear
/// points plus one more in PG(2,2) for (n,q0,h) = (3,2,3), and a triangle
/// in PG(2,3) for (3,3,2).
pub fn builtin_cone_base(n: usize, q0: u64, h: u32) -> Option<Vec<Vec<u32>>> {
    match (n, q0, h) {
        (3, 2, 3) => Some(vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0], vec![0, 0, 1]]),
        (3, 3, 2) => Some(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]),
        _ => None,
    }
}

/// The cone with vertex V = (1,0,...,0) over a base O in the hyperplane
/// X0 = 0 of the subgeometry PG(n,q0) of PG(n,q0^h), without its vertex.
///
/// `base` lists coordinates of O in PG(n-1,q0) as GF(q0) indices; without
/// one, `builtin_cone_base` is used.
pub fn cone_set(n: usize, q0: u64, h: u32, base: Option<&[Vec<u32>]>) -> Result<PointSet> {
    check_q(q0)?;
    if n < 2 || h < 1 {
        return usage("cone_set needs n >= 2 and h >= 1");
    }
    let q = q0.checked_pow(h).filter(|&q| q <= 1 << 22).ok_or_else(|| Error::Usage("q0^h too large".into()))?;
    let small = Field::from_order(q0)?;
    let sub_space = ProjSpace::new(n - 1, small.clone());
    let builtin = builtin_cone_base(n, q0, h);
    let list = match (base, &builtin) {
        (Some(list), _) => list,
        (None, Some(b)) => &b[..],
        (None, None) => {
            return usage(format!(
                "no built-in cone base for n = {n}, q0 = {q0}, h = {h}; supply one with q0^(h-1) points"
            ))
        }
    };
    let base_pts: Vec<ProjPoint> = list.iter().map(|c| sub_space.point_from_ints(c)).collect::<Result<_>>()?;
    let want = q0.pow(h - 1) as usize;
    if base_pts.len() != want || base_pts.iter().collect::<HashSet<_>>().len() != want {
        return usage(format!("cone base must have q0^(h-1) = {want} distinct points, got {}", base_pts.len()));
    }
    if pg::span(&sub_space, &base_pts)?.rank() != n {
        return usage("cone base does not span its hyperplane");
    }
    let tangent_ok = setanalysis::tangent_coverage(&PointSet::custom(&sub_space, base_pts.clone())?, false)
        .uncovered
        .is_empty();

    let space = ProjSpace::over_order(n, q)?;
    let f = space.field().clone();
    let emb = f.embedding(&small)?;
    let mut pts = Vec::new();
    for o in &base_pts {
        for mu in small.elements() {
            let mut v = vec![emb[mu.index()]];
            v.extend(o.coords().iter().map(|c| emb[c.index()]));
            pts.push(space.point(v)?);
        }
    }
    let mut vertex = vec![0u32; n + 1];
    vertex[0] = 1;
    PointSet::new(
        Family::Cone,
        &space,
        pts,
        meta(&[
            ("n", json!(n)),
            ("q0", json!(q0)),
            ("h", json!(h)),
            ("vertex", json!(vertex)),
            ("base", json!(base_pts.iter().map(|p| p.coord_ints()).collect::<Vec<_>>())),
            ("base_tangent_condition", json!(tangent_ok)),
        ]),
    )
}

/// The coordinate matrix with the points of K as columns.
pub fn coordinate_matrix(k: &PointSet) -> Matrix {
    Matrix::from_rows(&k.points().iter().map(|p| p.coords().to_vec()).collect::<Vec<_>>()).transpose()
}

/// Reduced basis of the orthogonal complement of the row space of the
/// coordinate matrix.
pub fn dual_generator_matrix(k: &PointSet) -> Matrix {
    linalg::nullspace(k.field(), &coordinate_matrix(k))
}

/// A dual k-arc in PG(k-n-2,q): the columns of the reduced basis of the
/// orthogonal complement of K's coordinate matrix. Only the projective class
/// of the result is meaningful.
pub fn dual_arc(k: &PointSet) -> Result<PointSet> {
    let n = k.n();
    let size = k.len();
    if size < n + 4 {
        return usage(format!("dual arcs need k >= n+4, got k = {size}, n = {n}"));
    }
    if let Some(w) = setanalysis::is_arc(k).witness {
        return usage(format!("input is not an arc: points {w:?} lie in a hyperplane"));
    }
    let f = k.field().clone();
    let b = dual_generator_matrix(k);
    debug_assert_eq!(b.rows, size - n - 1);
    let space = ProjSpace::new(size - n - 2, f);
    let cols = b.transpose();
    let pts = (0..size).map(|j| space.point(cols.row(j).to_vec())).collect::<Result<Vec<_>>>()?;
    let out = PointSet::new(
        Family::DualArc,
        &space,
        pts,
        meta(&[("source_family", json!(k.family().as_str())), ("source_n", json!(n))]),
    )?;
    if setanalysis::is_arc(&out).witness.is_some() {
        return usage("dual of an arc failed the arc test");
    }
    Ok(out)
}

/// One row of the family catalog.
#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub family: &'static str,
    pub condition: &'static str,
    pub expected_aut_order: &'static str,
    pub constructible: bool,
    pub note: &'static str,
}

pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            family: "basis",
            condition: "q = n+1",
            expected_aut_order: "printed: h q^(n+1) (q-1) q!  (also h q^(n+1) (q-1)^n q!)",
            constructible: true,
            note: "two printed formulas disagree; settled by the stabilizer oracle",
        },
        CatalogEntry {
            family: "frame",
            condition: "q = n+2",
            expected_aut_order: "printed: h q^(n+1) (q-1)^n q!  (also h q^(n+1) (q-1) q!)",
            constructible: true,
            note: "two printed formulas disagree; settled by the stabilizer oracle",
        },
        CatalogEntry {
            family: "nrc_minus_point",
            condition: "q >= n+3 (n >= 3, or n = 2 with q odd)",
            expected_aut_order: "h q^(n+2) (q-1)^2",
            constructible: true,
            note: "",
        },
        CatalogEntry {
            family: "casse_glynn",
            condition: "n = 3, q = 2^h, h > 2, σ = 2^e with gcd(e,h) = 1",
            expected_aut_order: "h q^5 (q-1)^2",
            constructible: true,
            note: "",
        },
        CatalogEntry {
            family: "glynn",
            condition: "n = 4, q = 9",
            expected_aut_order: "9^6 8^2",
            constructible: false,
            note: "not constructible: no explicit coordinates available",
        },
        CatalogEntry {
            family: "elliptic_baer",
            condition: "n = 3, q > 4 square",
            expected_aut_order: "> h q^5 (q-1)^2 (geometric part 2 h q^5 (q-1)^2 by the stabilizer oracle)",
            constructible: true,
            note: "non-geometric automorphisms expected",
        },
        CatalogEntry {
            family: "tits_baer",
            condition: "n = 3, q = 2^(2(2e+1))",
            expected_aut_order: "> h q^5 (q-1) (√q-1)",
            constructible: true,
            note: "non-geometric automorphisms expected; graph too large for desk-scale analysis",
        },
        CatalogEntry {
            family: "hyperbolic_baer",
            condition: "n = 3, q > 4 square",
            expected_aut_order: "> 2 h q^5 (q-1) (√q-1)^2",
            constructible: true,
            note: "non-geometric automorphisms expected",
        },
        CatalogEntry {
            family: "cone",
            condition: "q = q0^h, base O of q0^(h-1) points spanning a hyperplane of PG(n,q0)",
            expected_aut_order: "> |Persp(H∞)| |Persp(V)| |PΓL(n,q0)_O| h/h0",
            constructible: true,
            note: "non-geometric automorphisms expected",
        },
        CatalogEntry {
            family: "dual_arc",
            condition: "k-arc with k >= n+4; lives in PG(k-n-2,q)",
            expected_aut_order: "|Persp(H∞)| |PΓL(n+1,q)_K| of the source arc",
            constructible: true,
            note: "",
        },
    ]
}
