//! Line-oriented problem files.
//!
//! ```text
//! # comment
//! field: q
//! vars: x y w z
//! ideal:
//!   x^2 + y^2 + w^2
//! system:
//!   x
//!   y
//!   w
//! twist: 1
//! center: point 0 0 0 1
//! ```
//!
//! `center:` may instead be `center: ideal` followed by indented linear forms,
//! and `profile: <g>` is followed by rows `d m deg [simple-non-jacobian]
//! [minimal-class]`. Polynomials are stored over `Q`; the declared field is
//! applied when a computation runs.

use std::fmt::Write as _;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;

use crate::bounds::{Component, ComponentFlags, SingularityProfile};
use crate::error::{Error, Result};
use crate::field::{FieldKind, Rationals};
use crate::ideals::Ideal;
use crate::mult::{Center, MultiplicityQuery};
use crate::poly::{Polynomial, VarNames};
use crate::vogel::VogelProblem;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CenterSpec {
    Point(Vec<BigRational>),
    Ideal(Vec<Polynomial<Rationals>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileSpec {
    pub g: usize,
    pub components: Vec<Component>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemFile {
    pub field: FieldKind,
    pub vars: VarNames,
    pub ideal: Vec<Polynomial<Rationals>>,
    pub system: Vec<Polynomial<Rationals>>,
    pub twist: Option<u32>,
    pub seed: Option<u64>,
    pub center: Option<CenterSpec>,
    pub profile: Option<ProfileSpec>,
    /// Gauss-map degree to test a profile against.
    pub gauss_degree: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Ideal,
    System,
    Center,
    Profile,
}

fn err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

fn parse_rational(s: &str) -> Option<BigRational> {
    BigRational::from_str(s).ok()
}

fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut field = FieldKind::Rationals;
        let mut vars: Option<VarNames> = None;
        let mut raw: [Vec<(usize, String)>; 3] = Default::default();
        let mut twist = None;
        let mut seed = None;
        let mut center_point: Option<Vec<BigRational>> = None;
        let mut center_ideal = false;
        let mut profile: Option<ProfileSpec> = None;
        let mut gauss_degree = None;
        let mut section = Section::None;
        let mut seen: Vec<String> = Vec::new();

        for (k, full) in text.lines().enumerate() {
            let ln = k + 1;
            let line = full.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            if line.starts_with(char::is_whitespace) {
                let item = line.trim();
                match section {
                    Section::Ideal => raw[0].push((ln, item.to_string())),
                    Section::System => raw[1].push((ln, item.to_string())),
                    Section::Center => raw[2].push((ln, item.to_string())),
                    Section::Profile => {
                        let p = profile.as_mut().expect("profile section is open");
                        p.components.push(parse_component(ln, item)?);
                    }
                    Section::None => return Err(err(ln, "indented line outside a section")),
                }
                continue;
            }
            let Some((key, value)) = line.split_once(':') else {
                return Err(err(ln, format!("expected `key: value`, got `{}`", line.trim())));
            };
            let key = key.trim();
            let value = value.trim();
            if seen.iter().any(|s| s == key) {
                return Err(err(ln, format!("duplicate `{key}`")));
            }
            seen.push(key.to_string());
            section = Section::None;
            let expect_empty = |section| {
                if value.is_empty() {
                    Ok(section)
                } else {
                    Err(err(ln, format!("`{key}:` takes no inline value")))
                }
            };
            match key {
                "field" => field = FieldKind::from_str(value).map_err(|e| err(ln, e))?,
                "vars" => {
                    let names: Vec<&str> = value.split_whitespace().collect();
                    if names.is_empty() {
                        return Err(err(ln, "empty variable list"));
                    }
                    for n in &names {
                        if !n.chars().next().is_some_and(char::is_alphabetic)
                            || !n.chars().all(|c| c.is_alphanumeric() || c == '_')
                        {
                            return Err(err(ln, format!("bad variable name `{n}`")));
                        }
                    }
                    vars = Some(VarNames::new(names.iter().map(|s| s.to_string())));
                }
                "ideal" => section = expect_empty(Section::Ideal)?,
                "system" => section = expect_empty(Section::System)?,
                "twist" => twist = Some(value.parse().map_err(|_| err(ln, format!("bad twist `{value}`")))?),
                "seed" => seed = Some(value.parse().map_err(|_| err(ln, format!("bad seed `{value}`")))?),
                "gauss-degree" => {
                    gauss_degree = Some(value.parse().map_err(|_| err(ln, format!("bad degree `{value}`")))?)
                }
                "center" => {
                    let mut words = value.split_whitespace();
                    match words.next() {
                        Some("point") => {
                            let coords = words
                                .map(|w| parse_rational(w).ok_or_else(|| err(ln, format!("bad coordinate `{w}`"))))
                                .collect::<Result<Vec<_>>>()?;
                            center_point = Some(coords);
                        }
                        Some("ideal") if words.next().is_none() => {
                            center_ideal = true;
                            section = Section::Center;
                        }
                        _ => return Err(err(ln, "center must be `point <coords>` or `ideal`")),
                    }
                }
                "profile" => {
                    let g = value.parse().map_err(|_| err(ln, format!("bad dimension `{value}`")))?;
                    profile = Some(ProfileSpec {
                        g,
                        components: Vec::new(),
                    });
                    section = Section::Profile;
                }
                other => return Err(err(ln, format!("unknown key `{other}`"))),
            }
        }

        let needs_vars = raw.iter().any(|r| !r.is_empty()) || center_point.is_some();
        let vars = match vars {
            Some(v) => v,
            None if needs_vars => return Err(Error::Parse("missing `vars:` line".into())),
            None => VarNames::new(Vec::<String>::new()),
        };
        let polys = |items: &[(usize, String)]| -> Result<Vec<Polynomial<Rationals>>> {
            items
                .iter()
                .map(|(ln, s)| Polynomial::parse(Rationals, &vars, s).map_err(|e| err(*ln, e)))
                .collect()
        };
        let ideal = polys(&raw[0])?;
        let system = polys(&raw[1])?;
        let center = if center_ideal {
            Some(CenterSpec::Ideal(polys(&raw[2])?))
        } else {
            center_point.map(CenterSpec::Point)
        };
        if let Some(CenterSpec::Point(p)) = &center {
            if p.len() != vars.len() {
                return Err(Error::Parse(format!("center has {} coordinates for {} variables", p.len(), vars.len())));
            }
        }
        if let Some(p) = &profile {
            SingularityProfile::new(p.g, p.components.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        }
        Ok(ProblemFile {
            field,
            vars,
            ideal,
            system,
            twist,
            seed,
            center,
            profile,
            gauss_degree,
        })
    }

    /// Canonical text; parsing it gives back `self`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "field: {}", self.field);
        if !self.vars.is_empty() {
            let _ = writeln!(out, "vars: {}", self.vars.names().join(" "));
        }
        let block = |out: &mut String, name: &str, ps: &[Polynomial<Rationals>]| {
            if !ps.is_empty() {
                let _ = writeln!(out, "{name}:");
                for p in ps {
                    let _ = writeln!(out, "  {}", p.format_with(&self.vars));
                }
            }
        };
        block(&mut out, "ideal", &self.ideal);
        block(&mut out, "system", &self.system);
        if let Some(t) = self.twist {
            let _ = writeln!(out, "twist: {t}");
        }
        if let Some(s) = self.seed {
            let _ = writeln!(out, "seed: {s}");
        }
        match &self.center {
            Some(CenterSpec::Point(p)) => {
                let coords: Vec<String> = p.iter().map(format_rational).collect();
                let _ = writeln!(out, "center: point {}", coords.join(" "));
            }
            Some(CenterSpec::Ideal(ps)) => {
                let _ = writeln!(out, "center: ideal");
                for p in ps {
                    let _ = writeln!(out, "  {}", p.format_with(&self.vars));
                }
            }
            None => {}
        }
        if let Some(p) = &self.profile {
            let _ = writeln!(out, "profile: {}", p.g);
            for c in &p.components {
                let _ = write!(out, "  {} {} {}", c.dim, c.mult, c.degree);
                if c.flags.simple_non_jacobian {
                    out.push_str(" simple-non-jacobian");
                }
                if c.flags.minimal_class {
                    out.push_str(" minimal-class");
                }
                out.push('\n');
            }
        }
        if let Some(d) = self.gauss_degree {
            let _ = writeln!(out, "gauss-degree: {d}");
        }
        out
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn variety(&self) -> Result<Ideal<Rationals>> {
        Ideal::new(Rationals, self.nvars(), self.ideal.clone())
    }

    /// The Vogel problem over `Q`; the declared twist, if any, must match.
    pub fn vogel_problem(&self, seed: u64) -> Result<VogelProblem<Rationals>> {
        if self.system.is_empty() {
            return Err(Error::InvalidInput("no `system:` section".into()));
        }
        let p = VogelProblem::new(self.variety()?, self.system.clone(), seed)?;
        if let Some(t) = self.twist {
            if t != p.twist() {
                return Err(Error::InvalidInput(format!(
                    "declared twist {t} but the system has degree {}",
                    p.twist()
                )));
            }
        }
        Ok(p)
    }

    /// Samuel multiplicity of the `system:` ideal on `V(ideal)` at `center:`.
    /// The local dimension is `dim X` minus the dimension of the center.
    pub fn multiplicity_query(&self) -> Result<MultiplicityQuery<Rationals>> {
        let n = self.nvars();
        let variety = self.variety()?;
        let dim_x = variety.affine_dimension();
        if dim_x < 0 {
            return Err(Error::InvalidInput("the variety is empty".into()));
        }
        let (center, dim_z) = match &self.center {
            None => return Err(Error::InvalidInput("no `center:` given".into())),
            Some(CenterSpec::Point(p)) => (Center::Point(p.clone()), 0),
            Some(CenterSpec::Ideal(gens)) => {
                let z = Ideal::new(Rationals, n, gens.clone())?;
                let dz = z.affine_dimension();
                if dz < 0 {
                    return Err(Error::InvalidInput("the center is empty".into()));
                }
                (Center::Linear(z), dz)
            }
        };
        let local = dim_x - dim_z;
        if local < 0 {
            return Err(Error::InvalidInput("center has larger dimension than the variety".into()));
        }
        if let Center::Point(p) = &center {
            if variety.generators().iter().any(|g| !g.evaluate(p).is_zero()) {
                return Err(Error::InvalidInput("center is not on the variety".into()));
            }
        }
        MultiplicityQuery::new(variety, self.system.clone(), center, local as usize)
    }

    pub fn singularity_profile(&self) -> Result<SingularityProfile> {
        let p = self
            .profile
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("no `profile:` section".into()))?;
        SingularityProfile::new(p.g, p.components.clone())
    }
}

/// One `d m deg [flags]` row.
pub fn parse_component(ln: usize, item: &str) -> Result<Component> {
    let words: Vec<&str> = item.split([' ', ',', '\t']).filter(|w| !w.is_empty()).collect();
    if words.len() < 3 {
        return Err(err(ln, format!("profile row `{item}` needs `d m deg`")));
    }
    let num = |w: &str| -> Result<u64> { w.parse().map_err(|_| err(ln, format!("bad number `{w}`"))) };
    let mut flags = ComponentFlags::default();
    for w in &words[3..] {
        match *w {
            "simple-non-jacobian" => flags.simple_non_jacobian = true,
            "minimal-class" => flags.minimal_class = true,
            other => return Err(err(ln, format!("unknown flag `{other}`"))),
        }
    }
    Ok(Component::new(num(words[0])? as usize, num(words[1])? as u32, num(words[2])?).flagged(flags))
}
