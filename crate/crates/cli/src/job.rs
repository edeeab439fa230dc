//! Job files: parsing into a validated [`JobSpec`] and rendering back.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use equivar::gm_geometry::{GmSpace, Polynomial, Rational, SheafComplex, Side, SpaceKind, Summand};
use equivar::graded_complexes::{EquivariantMatrix, GradedComplex, GradedFreeModule, Term};
use equivar::k_localization::KClass;
use equivar::windows_walls::{Path, TorusRep};
use num::Zero;

use crate::syntax::{parse_document, ParseError, Section, Spanned, Value};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    Lcoh,
    Sod,
    Cohomology,
    Strata,
    Chambers,
    Window,
    Index,
    Localize,
    Wallcross,
    Qsym,
    Monodromy,
}

impl Op {
    pub const ALL: [Op; 11] = [
        Op::Lcoh,
        Op::Sod,
        Op::Cohomology,
        Op::Strata,
        Op::Chambers,
        Op::Window,
        Op::Index,
        Op::Localize,
        Op::Wallcross,
        Op::Qsym,
        Op::Monodromy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Op::Lcoh => "lcoh",
            Op::Sod => "sod",
            Op::Cohomology => "cohomology",
            Op::Strata => "strata",
            Op::Chambers => "chambers",
            Op::Window => "window",
            Op::Index => "index",
            Op::Localize => "localize",
            Op::Wallcross => "wallcross",
            Op::Qsym => "qsym",
            Op::Monodromy => "monodromy",
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Op {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Op::ALL
            .into_iter()
            .find(|op| op.name() == s)
            .ok_or_else(|| format!("unknown operation `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceSpec {
    /// Projective or affine space with a 𝔾ₘ action; `a` is carried by the job.
    Gm(GmSpace),
    Rep(TorusRep),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComplexSpec {
    /// Graded module complex over `k[x]`, i.e. a complex on `A^1/𝔾ₘ`.
    Graded(GradedComplex),
    /// Complex of equivariant line bundles on the job's space.
    Sheaf(SheafComplex),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Params {
    pub complex: Option<String>,
    pub class: Option<String>,
    pub w: Option<i64>,
    pub a: Option<Rational>,
    pub a1: Option<Rational>,
    pub a2: Option<Rational>,
    pub theta: Option<Vec<Rational>>,
    pub ell: Option<Side>,
    pub path: Option<Path>,
    pub component: Option<usize>,
    pub side: Option<Side>,
    pub order: Option<i64>,
    pub window: Option<(i64, i64)>,
    pub j_max: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub space: Option<SpaceSpec>,
    pub complexes: BTreeMap<String, ComplexSpec>,
    pub classes: BTreeMap<String, KClass>,
    pub op: Op,
    pub params: Params,
}

fn violation(rule: impl Into<String>) -> CliError {
    CliError::Precondition(rule.into())
}

impl JobSpec {
    pub fn gm_space(&self) -> Result<&GmSpace, CliError> {
        match &self.space {
            Some(SpaceSpec::Gm(s)) => Ok(s),
            _ => Err(violation(format!(
                "op `{}` requires a [space] of kind projective or affine",
                self.op
            ))),
        }
    }

    pub fn rep(&self) -> Result<&TorusRep, CliError> {
        match &self.space {
            Some(SpaceSpec::Rep(r)) => Ok(r),
            _ => Err(violation(format!(
                "op `{}` requires a [space] of kind rep",
                self.op
            ))),
        }
    }

    pub fn complex(&self) -> Result<&ComplexSpec, CliError> {
        let name = self
            .params
            .complex
            .as_ref()
            .ok_or_else(|| violation(format!("op `{}` requires `complex`", self.op)))?;
        self.complexes
            .get(name)
            .ok_or_else(|| violation(format!("no section [complex.{name}]")))
    }

    pub fn graded_complex(&self) -> Result<&GradedComplex, CliError> {
        match self.complex()? {
            ComplexSpec::Graded(c) => Ok(c),
            ComplexSpec::Sheaf(_) => Err(violation(format!(
                "op `{}` requires a complex given by `degrees`",
                self.op
            ))),
        }
    }

    pub fn class(&self) -> Result<&KClass, CliError> {
        let name = self
            .params
            .class
            .as_ref()
            .ok_or_else(|| violation(format!("op `{}` requires `class`", self.op)))?;
        self.classes
            .get(name)
            .ok_or_else(|| violation(format!("no section [class.{name}]")))
    }

    pub fn require<'a, T>(&self, value: &'a Option<T>, key: &str) -> Result<&'a T, CliError> {
        value
            .as_ref()
            .ok_or_else(|| violation(format!("op `{}` requires `{key}`", self.op)))
    }

    /// Checks that everything the operation reads is present and well-typed.
    pub fn validate(&self) -> Result<(), CliError> {
        let p = &self.params;
        if let Some((lo, hi)) = p.window {
            if lo > hi {
                return Err(violation(format!("window {lo}..{hi} is empty")));
            }
        }
        if let Some(order) = p.order {
            if order < 1 {
                return Err(violation(format!(
                    "truncation order must be positive, got {order}"
                )));
            }
        }
        match self.op {
            Op::Lcoh | Op::Sod => {
                self.graded_complex()?;
                self.require(&p.w, "w")?;
            }
            Op::Cohomology => {
                self.graded_complex()?;
            }
            Op::Strata => {
                self.gm_space()?;
                self.require(&p.a, "a")?;
            }
            Op::Chambers => {
                self.gm_space()?;
            }
            Op::Window => {
                let space = self.gm_space()?;
                self.require(&p.theta, "theta")?;
                self.require(&p.a, "a")?;
                if matches!(self.complex()?, ComplexSpec::Graded(_))
                    && !(space.kind() == SpaceKind::Affine && space.action_weights() == [1])
                {
                    return Err(violation(
                        "a complex given by `degrees` lives on the affine line with weight [1]",
                    ));
                }
            }
            Op::Index => {
                self.gm_space()?;
                self.class()?;
            }
            Op::Localize => {
                self.gm_space()?;
                self.class()?;
                self.require(&p.component, "component")?;
                self.require(&p.side, "side")?;
            }
            Op::Wallcross => {
                self.gm_space()?;
                self.class()?;
                self.require(&p.a1, "a1")?;
                self.require(&p.a2, "a2")?;
            }
            Op::Qsym => {
                self.rep()?;
            }
            Op::Monodromy => {
                self.rep()?;
                self.require(&p.path, "path")?;
            }
        }
        Ok(())
    }

    /// The job file that parses back to `self`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        match &self.space {
            Some(SpaceSpec::Gm(s)) => {
                let _ = writeln!(
                    out,
                    "[space]\nkind = {}\nweights = {}",
                    s.kind().name(),
                    int_list(s.action_weights())
                );
            }
            Some(SpaceSpec::Rep(r)) => {
                let weights = if r.rank() == 1 {
                    int_list(&r.weights().iter().map(|w| w[0]).collect::<Vec<_>>())
                } else {
                    list(r.weights().iter().map(|w| int_list(w)))
                };
                let _ = writeln!(
                    out,
                    "[space]\nkind = rep\nrank = {}\nweights = {weights}",
                    r.rank()
                );
                if r.zero_weights() > 0 {
                    let _ = writeln!(out, "zero_weights = {}", r.zero_weights());
                }
            }
            None => {}
        }
        for (name, c) in &self.complexes {
            let _ = writeln!(out, "\n[complex.{name}]");
            match c {
                ComplexSpec::Graded(g) => {
                    let _ = writeln!(out, "start = {}", g.start());
                    let _ = writeln!(
                        out,
                        "degrees = {}",
                        list(g.terms().iter().map(|t| int_list(t.degrees())))
                    );
                    for (k, d) in g.differentials().iter().enumerate() {
                        let rows = (0..d.target().rank()).map(|i| {
                            list((0..d.source().rank()).map(|j| {
                                d.term(i, j)
                                    .map_or_else(|| "\"0\"".to_string(), |t| format!("\"{t}\""))
                            }))
                        });
                        let _ = writeln!(out, "d{k} = {}", list(rows));
                    }
                }
                ComplexSpec::Sheaf(s) => {
                    let _ = writeln!(out, "start = {}", s.start());
                    let terms = s
                        .terms()
                        .iter()
                        .map(|t| list(t.iter().map(|x| format!("[{}, {}]", x.d, x.m))));
                    let _ = writeln!(out, "summands = {}", list(terms));
                    for (k, d) in s.differentials().iter().enumerate() {
                        let rows = d
                            .iter()
                            .map(|row| list(row.iter().map(|p| format!("\"{p}\""))));
                        let _ = writeln!(out, "d{k} = {}", list(rows));
                    }
                }
            }
        }
        for (name, class) in &self.classes {
            let summands = class.summands().map(|(d, m, n)| format!("[{d}, {m}, {n}]"));
            let _ = writeln!(out, "\n[class.{name}]\nsummands = {}", list(summands));
        }
        let p = &self.params;
        let _ = writeln!(out, "\n[job]\nop = {}", self.op);
        let mut key = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                let _ = writeln!(out, "{k} = {v}");
            }
        };
        key("complex", p.complex.clone());
        key("class", p.class.clone());
        key("w", p.w.map(|w| w.to_string()));
        key("a", p.a.as_ref().map(Rational::to_string));
        key("a1", p.a1.as_ref().map(Rational::to_string));
        key("a2", p.a2.as_ref().map(Rational::to_string));
        key(
            "theta",
            p.theta
                .as_ref()
                .map(|t| list(t.iter().map(Rational::to_string))),
        );
        key("ell", p.ell.map(|s| s.to_string()));
        key("path", p.path.as_ref().map(render_path));
        key("component", p.component.map(|c| c.to_string()));
        key("side", p.side.map(|s| s.to_string()));
        key("order", p.order.map(|o| o.to_string()));
        key("window", p.window.map(|(lo, hi)| format!("[{lo}, {hi}]")));
        key("j_max", p.j_max.map(|j| j.to_string()));
        out
    }
}

fn list(items: impl Iterator<Item = String>) -> String {
    format!("[{}]", items.collect::<Vec<_>>().join(", "))
}

fn int_list(items: &[i64]) -> String {
    list(items.iter().map(i64::to_string))
}

fn render_path(path: &Path) -> String {
    let mut items = vec![path.start.to_string()];
    for (side, theta) in &path.legs {
        items.push(side.to_string());
        items.push(theta.to_string());
    }
    list(items.into_iter())
}

/// Parses and validates a job file.
pub fn parse_input(text: &str) -> Result<JobSpec, CliError> {
    let sections = parse_document(text)?;
    let mut space_section = None;
    let mut job_section = None;
    for s in &sections {
        match s.name.as_str() {
            "space" | "job" => {
                let slot = if s.name == "space" {
                    &mut space_section
                } else {
                    &mut job_section
                };
                if slot.is_some() {
                    return Err(s.error(format!("duplicate section [{}]", s.name)).into());
                }
                *slot = Some(s);
            }
            name if name.starts_with("complex.") || name.starts_with("class.") => {
                let (_, label) = name.split_once('.').expect("prefix checked");
                if label.is_empty() || !label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                {
                    return Err(s.error(format!("invalid name `{label}`")).into());
                }
            }
            other => return Err(s.error(format!("unknown section [{other}]")).into()),
        }
    }
    let space = space_section.map(parse_space).transpose()?;
    let mut complexes = BTreeMap::new();
    let mut classes = BTreeMap::new();
    for s in &sections {
        if let Some(name) = s.name.strip_prefix("complex.") {
            if complexes
                .insert(name.to_string(), parse_complex(s, space.as_ref())?)
                .is_some()
            {
                return Err(s.error(format!("duplicate section [{}]", s.name)).into());
            }
        } else if let Some(name) = s.name.strip_prefix("class.") {
            if classes.insert(name.to_string(), parse_class(s)?).is_some() {
                return Err(s.error(format!("duplicate section [{}]", s.name)).into());
            }
        }
    }
    let job_section = job_section.ok_or_else(|| ParseError {
        line: 1,
        column: 1,
        message: "missing [job] section".into(),
    })?;
    let (op, params) = parse_job(job_section)?;
    let job = JobSpec {
        space,
        complexes,
        classes,
        op,
        params,
    };
    job.validate()?;
    Ok(job)
}

/// Reads the keys of one section, rejecting any key not in `known`.
struct Keys<'a> {
    section: &'a Section,
}

impl<'a> Keys<'a> {
    fn new(section: &'a Section, known: &[&str]) -> Result<Self, ParseError> {
        for e in &section.entries {
            let differential = e
                .key
                .strip_prefix('d')
                .is_some_and(|k| k.parse::<usize>().is_ok());
            let allowed =
                known.contains(&e.key.as_str()) || (known.contains(&"d*") && differential);
            if !allowed {
                return Err(ParseError {
                    line: e.line,
                    column: e.column,
                    message: format!("unknown key `{}` in [{}]", e.key, section.name),
                });
            }
        }
        Ok(Self { section })
    }

    fn get(&self, key: &str) -> Option<&'a Spanned> {
        self.section
            .entries
            .iter()
            .find(|e| e.key == key)
            .map(|e| &e.value)
    }

    fn required(&self, key: &str) -> Result<&'a Spanned, ParseError> {
        self.get(key).ok_or_else(|| {
            self.section
                .error(format!("[{}] is missing `{key}`", self.section.name))
        })
    }
}

fn core_at(v: &Spanned) -> impl Fn(equivar::Error) -> ParseError + '_ {
    move |e| v.error(e.to_string())
}

fn int_vec(v: &Spanned) -> Result<Vec<i64>, ParseError> {
    v.list()?.iter().map(Spanned::integer).collect()
}

fn parse_space(s: &Section) -> Result<SpaceSpec, ParseError> {
    let keys = Keys::new(s, &["kind", "weights", "rank", "zero_weights"])?;
    let kind = keys.required("kind")?;
    let weights = keys.required("weights")?;
    match kind.word()? {
        k @ ("projective" | "affine") => {
            for key in ["rank", "zero_weights"] {
                if let Some(v) = keys.get(key) {
                    return Err(v.error(format!("`{key}` applies to kind rep only")));
                }
            }
            let ws = int_vec(weights)?;
            let space = if k == "projective" {
                GmSpace::projective(ws)
            } else {
                GmSpace::affine(ws)
            };
            Ok(SpaceSpec::Gm(space.map_err(core_at(weights))?))
        }
        "rep" => {
            let items = weights.list()?;
            let nested = items
                .first()
                .is_some_and(|i| matches!(i.value, Value::List(_)));
            let vectors: Vec<Vec<i64>> = if nested {
                items.iter().map(int_vec).collect::<Result<_, _>>()?
            } else {
                items
                    .iter()
                    .map(|i| i.integer().map(|w| vec![w]))
                    .collect::<Result<_, _>>()?
            };
            let rank = match keys.get("rank") {
                Some(r) => {
                    usize::try_from(r.integer()?).map_err(|_| r.error("rank must be positive"))?
                }
                None => vectors.first().map_or(1, Vec::len),
            };
            let mut rep = TorusRep::new(rank, vectors).map_err(core_at(weights))?;
            if let Some(z) = keys.get("zero_weights") {
                let k =
                    usize::try_from(z.integer()?).map_err(|_| z.error("must be nonnegative"))?;
                rep = rep.with_zero_weights(k);
            }
            Ok(SpaceSpec::Rep(rep))
        }
        other => Err(kind.error(format!(
            "unknown kind `{other}` (projective, affine or rep)"
        ))),
    }
}

type Rows<'a> = Vec<Vec<&'a Spanned>>;

fn differential_entries<'a>(
    keys: &Keys<'a>,
    k: usize,
) -> Result<Option<(&'a Spanned, Rows<'a>)>, ParseError> {
    let Some(v) = keys.get(&format!("d{k}")) else {
        return Ok(None);
    };
    let rows = v
        .list()?
        .iter()
        .map(|row| Ok(row.list()?.iter().collect()))
        .collect::<Result<_, ParseError>>()?;
    Ok(Some((v, rows)))
}

fn parse_complex(s: &Section, space: Option<&SpaceSpec>) -> Result<ComplexSpec, ParseError> {
    let keys = Keys::new(s, &["start", "degrees", "summands", "d*"])?;
    let start = keys.get("start").map_or(Ok(0), Spanned::integer)?;
    match (keys.get("degrees"), keys.get("summands")) {
        (Some(degrees), None) => {
            let terms: Vec<GradedFreeModule> = degrees
                .list()?
                .iter()
                .map(|t| int_vec(t).map(GradedFreeModule::new))
                .collect::<Result<_, _>>()?;
            let mut differentials = Vec::new();
            for k in 0..terms.len().saturating_sub(1) {
                let (v, rows) = differential_entries(&keys, k)?
                    .ok_or_else(|| s.error(format!("[{}] is missing `d{k}`", s.name)))?;
                let rows: Vec<Vec<Option<Term>>> = rows
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|e| {
                                let t: Term = e.quoted()?.parse().map_err(core_at(e))?;
                                Ok((!t.coeff.is_zero()).then_some(t))
                            })
                            .collect::<Result<_, ParseError>>()
                    })
                    .collect::<Result<_, _>>()?;
                let d =
                    EquivariantMatrix::from_terms(terms[k].clone(), terms[k + 1].clone(), &rows)
                        .map_err(core_at(v))?;
                differentials.push(d);
            }
            check_no_extra_differentials(&keys, terms.len())?;
            let c = GradedComplex::new(start, terms, differentials)
                .map_err(|e| s.error(e.to_string()))?;
            Ok(ComplexSpec::Graded(c))
        }
        (None, Some(summands)) => {
            let Some(SpaceSpec::Gm(space)) = space else {
                return Err(
                    summands.error("`summands` needs a [space] of kind projective or affine")
                );
            };
            let terms: Vec<Vec<Summand>> = summands
                .list()?
                .iter()
                .map(|t| {
                    t.list()?
                        .iter()
                        .map(|pair| match pair.list()? {
                            [d, m] => Ok(Summand::new(d.integer()?, m.integer()?)),
                            _ => Err(pair.error("a summand is [d, m]")),
                        })
                        .collect()
                })
                .collect::<Result<_, ParseError>>()?;
            let mut differentials = Vec::new();
            for k in 0..terms.len().saturating_sub(1) {
                let (_, rows) = differential_entries(&keys, k)?
                    .ok_or_else(|| s.error(format!("[{}] is missing `d{k}`", s.name)))?;
                let rows: Vec<Vec<Polynomial>> = rows
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|e| e.quoted()?.parse::<Polynomial>().map_err(core_at(e)))
                            .collect()
                    })
                    .collect::<Result<_, _>>()?;
                differentials.push(rows);
            }
            check_no_extra_differentials(&keys, terms.len())?;
            let c = SheafComplex::new(space, start, terms, differentials)
                .map_err(|e| s.error(e.to_string()))?;
            Ok(ComplexSpec::Sheaf(c))
        }
        (Some(_), Some(v)) => Err(v.error("give either `degrees` or `summands`, not both")),
        (None, None) => Err(s.error(format!("[{}] needs `degrees` or `summands`", s.name))),
    }
}

fn check_no_extra_differentials(keys: &Keys, terms: usize) -> Result<(), ParseError> {
    for e in &keys.section.entries {
        if let Some(k) = e
            .key
            .strip_prefix('d')
            .and_then(|k| k.parse::<usize>().ok())
        {
            if k + 1 >= terms.max(1) {
                return Err(ParseError {
                    line: e.line,
                    column: e.column,
                    message: format!("`{}` has no target: the complex has {terms} terms", e.key),
                });
            }
        }
    }
    Ok(())
}

fn parse_class(s: &Section) -> Result<KClass, ParseError> {
    let keys = Keys::new(s, &["summands"])?;
    let summands = keys
        .required("summands")?
        .list()?
        .iter()
        .map(|t| match t.list()? {
            [d, m] => Ok((d.integer()?, m.integer()?, 1)),
            [d, m, n] => Ok((d.integer()?, m.integer()?, n.integer()?)),
            _ => Err(t.error("a class summand is [d, m] or [d, m, multiplicity]")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(KClass::from_summands(summands))
}

fn side(v: &Spanned) -> Result<Side, ParseError> {
    Side::parse(v.word()?).map_err(core_at(v))
}

fn parse_path(v: &Spanned) -> Result<Path, ParseError> {
    let items = v.list()?;
    let (first, rest) = items
        .split_first()
        .ok_or_else(|| v.error("a path starts with its initial theta"))?;
    if rest.len() % 2 != 0 {
        return Err(v.error("a path is [theta0, side, theta1, side, theta2, ...]"));
    }
    let legs = rest
        .chunks(2)
        .map(|leg| Ok((side(&leg[0])?, leg[1].rational()?)))
        .collect::<Result<_, ParseError>>()?;
    Ok(Path::new(first.rational()?, legs))
}

fn parse_job(s: &Section) -> Result<(Op, Params), ParseError> {
    let keys = Keys::new(
        s,
        &[
            "op",
            "complex",
            "class",
            "w",
            "a",
            "a1",
            "a2",
            "theta",
            "ell",
            "path",
            "component",
            "side",
            "order",
            "window",
            "j_max",
        ],
    )?;
    let op_value = keys.required("op")?;
    let op: Op = op_value
        .word()?
        .parse()
        .map_err(|e: String| op_value.error(e))?;
    let name = |key: &str| {
        keys.get(key)
            .map(|v| v.word().map(str::to_string))
            .transpose()
    };
    let rational = |key: &str| keys.get(key).map(Spanned::rational).transpose();
    let params = Params {
        complex: name("complex")?,
        class: name("class")?,
        w: keys.get("w").map(Spanned::integer).transpose()?,
        a: rational("a")?,
        a1: rational("a1")?,
        a2: rational("a2")?,
        theta: keys
            .get("theta")
            .map(|v| v.list()?.iter().map(Spanned::rational).collect())
            .transpose()?,
        ell: keys.get("ell").map(side).transpose()?,
        path: keys.get("path").map(parse_path).transpose()?,
        component: keys
            .get("component")
            .map(|v| {
                usize::try_from(v.integer()?)
                    .map_err(|_| v.error("component index must be nonnegative"))
            })
            .transpose()?,
        side: keys.get("side").map(side).transpose()?,
        order: keys.get("order").map(Spanned::integer).transpose()?,
        window: keys
            .get("window")
            .map(|v| match v.list()? {
                [lo, hi] => Ok((lo.integer()?, hi.integer()?)),
                _ => Err(v.error("window is [lo, hi]")),
            })
            .transpose()?,
        j_max: keys
            .get("j_max")
            .map(|v| {
                u32::try_from(v.integer()?)
                    .map_err(|_| v.error("j_max must be a nonnegative integer"))
            })
            .transpose()?,
    };
    Ok((op, params))
}
