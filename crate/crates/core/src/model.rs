//! Model files: a TOML document describing a chart, an algebroid and the
//! optional Nambu, volume, coframe and expectation data attached to it.
//!
//! Exterior coefficients are keyed by comma-separated increasing 1-based
//! index lists, e.g. `"1,2,3" = "exp(x1)"` under `[nambu.coefficients]`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::Range;

use serde::Deserialize;
use toml::Spanned;

use crate::algebroid::{self, Algebroid, Presentation};
use crate::chart::Chart;
use crate::elw::Coframe;
use crate::error::{Error, Result};
use crate::modular::VolumeSection;
use crate::nambu::NambuStructure;
use crate::scalar::{parse_expr, Scalar, ZeroConfig};
use crate::tensor::{Blade, ExteriorTensor, Variance};

/// Coefficients keyed by 0-based increasing index lists.
pub type Coefficients = BTreeMap<Vec<usize>, Scalar>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebroidKind {
    Tangent,
    LieAlgebra,
    Action,
    Cotangent,
    General,
}

impl AlgebroidKind {
    pub fn label(self) -> &'static str {
        match self {
            AlgebroidKind::Tangent => "tangent",
            AlgebroidKind::LieAlgebra => "lie-algebra",
            AlgebroidKind::Action => "action",
            AlgebroidKind::Cotangent => "cotangent",
            AlgebroidKind::General => "general",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [
            AlgebroidKind::Tangent,
            AlgebroidKind::LieAlgebra,
            AlgebroidKind::Action,
            AlgebroidKind::Cotangent,
            AlgebroidKind::General,
        ]
        .into_iter()
        .find(|k| k.label() == s)
    }
}

/// Whether the Nambu check is expected to pass on the model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expectation {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NambuSection {
    pub order: usize,
    pub allow_order_2: bool,
    pub expect: Expectation,
    pub coefficients: Coefficients,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VolumeSpec {
    pub coefficient: Scalar,
    pub nonvanishing: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    pub name: String,
    pub description: String,
    pub chart: Chart,
    pub kind: AlgebroidKind,
    pub rank: usize,
    /// `anchor[i][a]`, used by the action and general kinds.
    pub anchor: Vec<Vec<Scalar>>,
    pub brackets: BTreeMap<(usize, usize), Vec<Scalar>>,
    /// Upper-triangular entries of the Poisson bivector of a cotangent model.
    pub poisson: BTreeMap<(usize, usize), Scalar>,
    pub nambu: Option<NambuSection>,
    pub volume: Option<VolumeSpec>,
    /// Rows of coframe components.
    pub coframe: Option<Vec<Vec<Scalar>>>,
    pub expected_modular: Coefficients,
    pub subordinate: Vec<Coefficients>,
    pub hamiltonian: Option<Scalar>,
}

// --- raw serde layer ---------------------------------------------------------

type Text = Spanned<String>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    name: Option<String>,
    description: Option<String>,
    chart: Option<RawChart>,
    algebroid: Option<RawAlgebroid>,
    nambu: Option<RawNambu>,
    volume: Option<RawVolume>,
    coframe: Option<RawCoframe>,
    modular: Option<RawModular>,
    subordinate: Option<RawSubordinate>,
    hamiltonian: Option<RawHamiltonian>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChart {
    #[serde(default)]
    coordinates: Vec<String>,
    #[serde(default)]
    functions: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgebroid {
    kind: Text,
    rank: Option<usize>,
    #[serde(default)]
    anchor: Vec<Vec<Text>>,
    #[serde(default)]
    brackets: BTreeMap<String, Vec<Text>>,
    #[serde(default)]
    poisson: BTreeMap<String, Text>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNambu {
    order: usize,
    #[serde(default)]
    allow_order_2: bool,
    expect: Option<Text>,
    #[serde(default)]
    coefficients: BTreeMap<String, Text>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVolume {
    coefficient: Text,
    #[serde(default)]
    nonvanishing: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCoframe {
    forms: Vec<Vec<Text>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModular {
    #[serde(default)]
    expected: BTreeMap<String, Text>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSubordinate {
    #[serde(default)]
    forms: Vec<BTreeMap<String, Text>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHamiltonian {
    potential: Text,
}

/// 1-based line and column of a byte offset.
fn position(src: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(src.len());
    let before = &src[..offset];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

struct Ctx<'s> {
    src: &'s str,
}

impl Ctx<'_> {
    fn err_at(&self, span: Range<usize>, message: impl Into<String>) -> Error {
        let (line, column) = position(self.src, span.start);
        Error::ModelParse {
            line,
            column,
            message: message.into(),
        }
    }

    fn expr(&self, t: &Text, chart: &Chart) -> Result<Scalar> {
        parse_expr(t.get_ref(), chart).map_err(|e| {
            // columns inside the expression are offset past the opening quote
            let inner = match &e {
                Error::Syntax { column, .. } | Error::UnknownSymbol { column, .. } => *column,
                _ => 1,
            };
            let span = t.span();
            let (line, column) = position(self.src, span.start);
            Error::ModelParse {
                line,
                column: column + inner,
                message: e.to_string(),
            }
        })
    }

    /// A key such as `"1,3"` into sorted 0-based indices below `rank`.
    fn key(&self, key: &str, len: Option<usize>, rank: usize, at: Range<usize>) -> Result<Vec<usize>> {
        let parts: Option<Vec<usize>> = if key.trim().is_empty() {
            Some(Vec::new())
        } else {
            key.split(',').map(|p| p.trim().parse::<usize>().ok()).collect()
        };
        let parts = parts.ok_or_else(|| self.err_at(at.clone(), format!("key `{key}` is not a comma-separated index list")))?;
        if parts.iter().any(|&i| i == 0 || i > rank) {
            return Err(self.err_at(at, format!("key `{key}` has an index outside 1..={rank}")));
        }
        if parts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(self.err_at(at, format!("key `{key}` must list strictly increasing indices")));
        }
        if let Some(n) = len {
            if parts.len() != n {
                return Err(self.err_at(at, format!("key `{key}` must have {n} indices")));
            }
        }
        Ok(parts.into_iter().map(|i| i - 1).collect())
    }

    fn coefficients(&self, raw: &BTreeMap<String, Text>, len: Option<usize>, rank: usize, chart: &Chart) -> Result<Coefficients> {
        let mut out = Coefficients::new();
        let mut grade = len;
        for (k, v) in raw {
            let idx = self.key(k, grade, rank, v.span())?;
            grade = Some(idx.len());
            out.insert(idx, self.expr(v, chart)?);
        }
        Ok(out)
    }

    fn row(&self, raw: &[Text], len: usize, chart: &Chart, what: &str) -> Result<Vec<Scalar>> {
        if raw.len() != len {
            let span = raw.first().map_or(0..0, |t| t.span());
            return Err(self.err_at(span, format!("{what} needs {len} entries, found {}", raw.len())));
        }
        raw.iter().map(|t| self.expr(t, chart)).collect()
    }

    fn pair(&self, key: &str, rank: usize, at: Range<usize>) -> Result<(usize, usize)> {
        let idx = self.key(key, Some(2), rank, at)?;
        Ok((idx[0], idx[1]))
    }
}

impl Model {
    pub fn parse(src: &str) -> Result<Model> {
        let raw: RawModel = toml::from_str(src).map_err(|e| {
            let (line, column) = e.span().map_or((1, 1), |s| position(src, s.start));
            Error::ModelParse {
                line,
                column,
                message: e.message().to_string(),
            }
        })?;
        let cx = Ctx { src };
        let chart = match &raw.chart {
            Some(c) => Chart::new(&c.coordinates, &c.functions)?,
            None => Chart::point(),
        };
        let ra = raw.algebroid.as_ref().ok_or_else(|| Error::MissingSection("algebroid".into()))?;
        let kind = AlgebroidKind::parse(ra.kind.get_ref())
            .ok_or_else(|| cx.err_at(ra.kind.span(), format!("unknown algebroid kind `{}`", ra.kind.get_ref())))?;
        let dim = chart.dim();
        let rank = match kind {
            AlgebroidKind::Tangent | AlgebroidKind::Cotangent => {
                if let Some(r) = ra.rank.filter(|&r| r != dim) {
                    return Err(cx.err_at(ra.kind.span(), format!("rank {r} differs from the chart dimension {dim}")));
                }
                dim
            }
            _ => ra.rank.ok_or_else(|| cx.err_at(ra.kind.span(), "`rank` is required for this kind"))?,
        };
        let anchor = match kind {
            AlgebroidKind::Action | AlgebroidKind::General => {
                if ra.anchor.len() != rank {
                    return Err(cx.err_at(ra.kind.span(), format!("`anchor` needs {rank} rows")));
                }
                ra.anchor
                    .iter()
                    .enumerate()
                    .map(|(i, r)| cx.row(r, dim, &chart, &format!("anchor row {}", i + 1)))
                    .collect::<Result<_>>()?
            }
            _ if !ra.anchor.is_empty() => {
                return Err(cx.err_at(ra.anchor[0].first().map_or(ra.kind.span(), |t| t.span()), "this kind takes no `anchor`"))
            }
            _ => Vec::new(),
        };
        let mut brackets = BTreeMap::new();
        for (k, v) in &ra.brackets {
            let at = v.first().map_or(ra.kind.span(), |t| t.span());
            if matches!(kind, AlgebroidKind::Tangent | AlgebroidKind::Cotangent) {
                return Err(cx.err_at(at, "this kind takes no `brackets`"));
            }
            let p = cx.pair(k, rank, at)?;
            brackets.insert(p, cx.row(v, rank, &chart, &format!("bracket `{k}`"))?);
        }
        if kind == AlgebroidKind::LieAlgebra && dim != 0 {
            return Err(cx.err_at(ra.kind.span(), "a lie-algebra model lives over a point; leave the chart empty"));
        }
        let mut poisson = BTreeMap::new();
        for (k, v) in &ra.poisson {
            if kind != AlgebroidKind::Cotangent {
                return Err(cx.err_at(v.span(), "only cotangent models take `poisson`"));
            }
            poisson.insert(cx.pair(k, rank, v.span())?, cx.expr(v, &chart)?);
        }

        let nambu = match &raw.nambu {
            Some(n) => {
                let expect = match n.expect.as_ref().map(|t| (t.get_ref().as_str(), t.span())) {
                    None | Some(("pass", _)) => Expectation::Pass,
                    Some(("fail", _)) => Expectation::Fail,
                    Some((other, span)) => return Err(cx.err_at(span, format!("`expect` must be \"pass\" or \"fail\", not `{other}`"))),
                };
                Some(NambuSection {
                    order: n.order,
                    allow_order_2: n.allow_order_2,
                    expect,
                    coefficients: cx.coefficients(&n.coefficients, Some(n.order), rank, &chart)?,
                })
            }
            None => None,
        };
        let volume = match &raw.volume {
            Some(v) => Some(VolumeSpec {
                coefficient: cx.expr(&v.coefficient, &chart)?,
                nonvanishing: v.nonvanishing,
            }),
            None => None,
        };
        let coframe = match &raw.coframe {
            Some(c) => {
                if c.forms.len() != rank {
                    let span = c.forms.first().and_then(|r| r.first()).map_or(0..0, |t| t.span());
                    return Err(cx.err_at(span, format!("coframe needs {rank} forms")));
                }
                Some(
                    c.forms
                        .iter()
                        .enumerate()
                        .map(|(i, r)| cx.row(r, rank, &chart, &format!("coframe form {}", i + 1)))
                        .collect::<Result<_>>()?,
                )
            }
            None => None,
        };
        let expected_modular = match &raw.modular {
            Some(m) => {
                let order = nambu.as_ref().map(|n| n.order).ok_or_else(|| Error::MissingSection("nambu".into()))?;
                cx.coefficients(&m.expected, Some(order - 1), rank, &chart)?
            }
            None => Coefficients::new(),
        };
        let subordinate = match &raw.subordinate {
            Some(s) => s
                .forms
                .iter()
                .map(|f| cx.coefficients(f, None, rank, &chart))
                .collect::<Result<_>>()?,
            None => Vec::new(),
        };
        let hamiltonian = match &raw.hamiltonian {
            Some(h) => Some(cx.expr(&h.potential, &chart)?),
            None => None,
        };
        Ok(Model {
            name: raw.name.unwrap_or_default(),
            description: raw.description.unwrap_or_default(),
            chart,
            kind,
            rank,
            anchor,
            brackets,
            poisson,
            nambu,
            volume,
            coframe,
            expected_modular,
            subordinate,
            hamiltonian,
        })
    }

    /// Canonical text: fixed section order, sorted keys, normalized
    /// expressions.
    pub fn emit(&self) -> String {
        let q = |s: &str| toml::Value::String(s.to_string()).to_string();
        let names = self.chart.coordinates();
        let e = |s: &Scalar| q(&s.display(names).to_string());
        let key = |idx: &[usize]| q(&idx.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(","));
        let row = |r: &[Scalar]| format!("[{}]", r.iter().map(e).collect::<Vec<_>>().join(", "));
        let list = |v: &[String]| format!("[{}]", v.iter().map(|s| q(s)).collect::<Vec<_>>().join(", "));
        let mut o = String::new();
        let _ = writeln!(o, "name = {}", q(&self.name));
        let _ = writeln!(o, "description = {}", q(&self.description));
        let _ = writeln!(o, "\n[chart]");
        let _ = writeln!(o, "coordinates = {}", list(self.chart.coordinates()));
        let _ = writeln!(o, "functions = {}", list(self.chart.functions()));
        let _ = writeln!(o, "\n[algebroid]");
        let _ = writeln!(o, "kind = {}", q(self.kind.label()));
        let _ = writeln!(o, "rank = {}", self.rank);
        if !self.anchor.is_empty() {
            let rows: Vec<String> = self.anchor.iter().map(|r| row(r)).collect();
            let _ = writeln!(o, "anchor = [{}]", rows.join(", "));
        }
        if !self.brackets.is_empty() {
            let _ = writeln!(o, "\n[algebroid.brackets]");
            for ((i, j), c) in &self.brackets {
                let _ = writeln!(o, "{} = {}", key(&[*i, *j]), row(c));
            }
        }
        if !self.poisson.is_empty() {
            let _ = writeln!(o, "\n[algebroid.poisson]");
            for ((i, j), c) in &self.poisson {
                let _ = writeln!(o, "{} = {}", key(&[*i, *j]), e(c));
            }
        }
        if let Some(n) = &self.nambu {
            let _ = writeln!(o, "\n[nambu]");
            let _ = writeln!(o, "order = {}", n.order);
            let _ = writeln!(o, "allow_order_2 = {}", n.allow_order_2);
            let expect = match n.expect {
                Expectation::Pass => "pass",
                Expectation::Fail => "fail",
            };
            let _ = writeln!(o, "expect = {}", q(expect));
            let _ = writeln!(o, "\n[nambu.coefficients]");
            for (k, c) in &n.coefficients {
                let _ = writeln!(o, "{} = {}", key(k), e(c));
            }
        }
        if let Some(v) = &self.volume {
            let _ = writeln!(o, "\n[volume]");
            let _ = writeln!(o, "coefficient = {}", e(&v.coefficient));
            let _ = writeln!(o, "nonvanishing = {}", v.nonvanishing);
        }
        if let Some(c) = &self.coframe {
            let rows: Vec<String> = c.iter().map(|r| row(r)).collect();
            let _ = writeln!(o, "\n[coframe]");
            let _ = writeln!(o, "forms = [{}]", rows.join(", "));
        }
        if !self.expected_modular.is_empty() {
            let _ = writeln!(o, "\n[modular.expected]");
            for (k, c) in &self.expected_modular {
                let _ = writeln!(o, "{} = {}", key(k), e(c));
            }
        }
        for f in &self.subordinate {
            let _ = writeln!(o, "\n[[subordinate.forms]]");
            for (k, c) in f {
                let _ = writeln!(o, "{} = {}", key(k), e(c));
            }
        }
        if let Some(g) = &self.hamiltonian {
            let _ = writeln!(o, "\n[hamiltonian]");
            let _ = writeln!(o, "potential = {}", e(g));
        }
        o
    }

    pub fn algebroid(&self) -> Result<Algebroid> {
        let pairs: Vec<((usize, usize), Vec<Scalar>)> = self.brackets.iter().map(|(k, v)| (*k, v.clone())).collect();
        let a = match self.kind {
            AlgebroidKind::Tangent => algebroid::tangent(&self.chart),
            AlgebroidKind::LieAlgebra => algebroid::lie_algebra_point(self.rank, &pairs)?,
            AlgebroidKind::Action => algebroid::action(&self.chart, self.rank, &pairs, self.anchor.clone())?,
            AlgebroidKind::Cotangent => {
                let pi = ExteriorTensor::from_terms(
                    Variance::Multivector,
                    self.rank,
                    2,
                    self.poisson.iter().map(|(&(i, j), c)| (Blade::from_bits((1 << i) | (1 << j)), c.clone())),
                );
                algebroid::cotangent_of_poisson(&self.chart, &pi)?
            }
            AlgebroidKind::General => {
                let mut p = Presentation::new("general algebroid", self.chart.clone(), self.rank);
                p.anchor = self.anchor.clone();
                for ((i, j), c) in pairs {
                    p.set_bracket(i, j, c)?;
                }
                Algebroid::new(p)?
            }
        };
        Ok(a)
    }

    pub fn nambu_section(&self) -> Result<&NambuSection> {
        self.nambu.as_ref().ok_or_else(|| Error::MissingSection("nambu".into()))
    }

    /// The multivector of the `[nambu]` section.
    pub fn nambu_tensor(&self) -> Result<ExteriorTensor> {
        let n = self.nambu_section()?;
        Ok(tensor_of(Variance::Multivector, self.rank, n.order, &n.coefficients))
    }

    /// The unverified structure; `allow_order_2` is the model flag or the
    /// caller's override.
    pub fn nambu_structure(&self, a: &Algebroid, allow_order_2: bool) -> Result<NambuStructure> {
        let n = self.nambu_section()?;
        NambuStructure::new(a, self.nambu_tensor()?, n.allow_order_2 || allow_order_2)
    }

    /// The `[volume]` section, or the standard top form when absent.
    pub fn volume_section(&self, a: &Algebroid, cfg: &ZeroConfig) -> Result<VolumeSection> {
        match &self.volume {
            Some(v) => VolumeSection::new(a, v.coefficient.clone(), v.nonvanishing, cfg),
            None => Ok(VolumeSection::standard(a)),
        }
    }

    pub fn coframe_of(&self, a: &Algebroid, cfg: &ZeroConfig) -> Result<Coframe> {
        let rows = self.coframe.as_ref().ok_or_else(|| Error::MissingSection("coframe".into()))?;
        let forms = rows.iter().map(|r| ExteriorTensor::from_components(Variance::Form, r.clone())).collect();
        Coframe::new(a, forms, cfg)
    }

    pub fn subordinate_forms(&self) -> Vec<ExteriorTensor> {
        self.subordinate
            .iter()
            .map(|c| {
                let grade = c.keys().next().map_or(1, Vec::len);
                tensor_of(Variance::Form, self.rank, grade, c)
            })
            .collect()
    }

    pub fn expected_modular_tensor(&self) -> Option<ExteriorTensor> {
        let n = self.nambu.as_ref()?;
        if self.expected_modular.is_empty() {
            return None;
        }
        Some(tensor_of(Variance::Multivector, self.rank, n.order - 1, &self.expected_modular))
    }
}

fn tensor_of(variance: Variance, rank: usize, grade: usize, c: &Coefficients) -> ExteriorTensor {
    ExteriorTensor::from_terms(
        variance,
        rank,
        grade,
        c.iter().map(|(idx, s)| (Blade::from_bits(idx.iter().fold(0u32, |b, &i| b | (1 << i))), s.clone())),
    )
}

/// Parses `"1,2=x1; 2,3=1"` into an exterior element of the given
/// variance; an empty key (`"=f"`) denotes a grade-0 element.
pub fn parse_exterior(text: &str, variance: Variance, rank: usize, chart: &Chart) -> Result<ExteriorTensor> {
    let mut grade = None;
    let mut terms = Vec::new();
    for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, expr) = part
            .split_once('=')
            .ok_or_else(|| Error::Model(format!("`{part}` is not of the form indices=expression")))?;
        let idx: Vec<usize> = if key.trim().is_empty() {
            Vec::new()
        } else {
            key.split(',')
                .map(|k| k.trim().parse::<usize>().ok().filter(|&i| i >= 1 && i <= rank).map(|i| i - 1))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::Model(format!("bad index list `{key}` (indices run over 1..={rank})")))?
        };
        if *grade.get_or_insert(idx.len()) != idx.len() {
            return Err(Error::Model(format!("`{part}` mixes grades")));
        }
        let c = parse_expr(expr.trim(), chart)?;
        terms.push(ExteriorTensor::monomial(variance, rank, &idx, c)?);
    }
    let grade = grade.ok_or_else(|| Error::Model("empty exterior element".into()))?;
    Ok(terms.iter().fold(ExteriorTensor::zero(variance, rank, grade), |acc, t| &acc + t))
}
