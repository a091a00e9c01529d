//! Problem files: a group, an optional action, an optional cocycle and any
//! number of named local systems, all in one JSON document.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use orbicoh_core::exact::{CycMatrix, CycVector, Cyclotomic, Phase, Rational};
use orbicoh_core::local_system::{extend_character, orbit_of_point};
use orbicoh_core::torsion::abelian_cocycle;
use orbicoh_core::{
    close_matrix_group, validate_linear, validate_torus, Cocycle, FiniteGroup, GlobalQuotient,
    InnerLocalSystem, LinearOrbifold, LocalSystemError, TorusOrbifold,
};
use serde_json::Value;

use crate::CliError;

/// Upper bound on the order of a group generated by matrices.
const MAX_GENERATED_ORDER: usize = 4096;

pub enum Quotient {
    Linear(LinearOrbifold),
    Torus(TorusOrbifold),
}

impl Quotient {
    pub fn global(&self) -> &GlobalQuotient {
        match self {
            Quotient::Linear(x) => x.quotient(),
            Quotient::Torus(x) => x.quotient(),
        }
    }
}

pub struct Problem {
    pub name: Option<String>,
    pub group: FiniteGroup,
    /// Present when the group was given by abelian invariants.
    pub invariants: Option<Vec<u64>>,
    pub quotient: Option<Quotient>,
    pub cocycle: Option<Cocycle>,
    raw_local_systems: BTreeMap<String, Value>,
}

fn bad(path: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{path}: {msg}"))
}

fn as_u64(v: &Value, path: &str) -> Result<u64, CliError> {
    v.as_u64().ok_or_else(|| bad(path, "expected a non-negative integer"))
}

fn as_index(v: &Value, path: &str) -> Result<usize, CliError> {
    as_u64(v, path).map(|x| x as usize)
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| bad(path, "expected an array"))
}

fn parse_int(s: &str, path: &str) -> Result<BigInt, CliError> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|_| bad(path, format!("cannot read integer {s:?}")))
}

/// A rational number: an integer, `[num, den]`, or a string `"n"` / `"n/d"`.
pub fn parse_rational(v: &Value, path: &str) -> Result<Rational, CliError> {
    let ratio = |n: BigInt, d: BigInt| {
        if d == BigInt::from(0) {
            Err(bad(path, "zero denominator"))
        } else {
            Ok(Rational::new(n, d))
        }
    };
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|x| Rational::from_integer(x.into()))
            .ok_or_else(|| bad(path, "expected an integer")),
        Value::String(s) => match s.split_once('/') {
            Some((n, d)) => ratio(parse_int(n, path)?, parse_int(d, path)?),
            None => Ok(Rational::from_integer(parse_int(s, path)?)),
        },
        Value::Array(a) if a.len() == 2 && a.iter().all(Value::is_i64) => ratio(
            a[0].as_i64().unwrap().into(),
            a[1].as_i64().unwrap().into(),
        ),
        _ => Err(bad(path, "expected a rational (integer, \"n/d\" or [num, den])")),
    }
}

/// A cyclotomic number: a rational, `"zeta^k"` / `"-zeta^k"` (ζ of the
/// action's level), or a power-basis coefficient list.
pub fn parse_cyclotomic(v: &Value, level: u32, path: &str) -> Result<Cyclotomic, CliError> {
    if let Value::String(s) = v {
        let t = s.trim();
        let (negative, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest.trim()),
            None => (false, t),
        };
        let power = if body == "zeta" {
            Some(1)
        } else {
            body.strip_prefix("zeta^")
                .map(|k| k.trim().parse::<i64>().map_err(|_| bad(path, format!("bad exponent in {s:?}"))))
                .transpose()?
        };
        if let Some(k) = power {
            let z = Cyclotomic::zeta_pow(level, k);
            return Ok(if negative { -z } else { z });
        }
    }
    match v {
        Value::Array(items) if !(items.len() == 2 && items.iter().all(Value::is_i64)) => {
            let coeffs = items
                .iter()
                .enumerate()
                .map(|(i, c)| parse_rational(c, &format!("{path}[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Cyclotomic::from_coeffs(level, coeffs))
        }
        _ => Ok(Cyclotomic::from_rational(level, parse_rational(v, path)?)),
    }
}

fn parse_matrix(v: &Value, level: u32, path: &str) -> Result<CycMatrix, CliError> {
    let rows = as_array(v, path)?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let p = format!("{path}[{i}]");
        let entries = as_array(row, &p)?;
        if entries.len() != rows.len() {
            return Err(bad(&p, "matrix must be square"));
        }
        out.push(
            entries
                .iter()
                .enumerate()
                .map(|(j, e)| parse_cyclotomic(e, level, &format!("{p}[{j}]")))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    if out.is_empty() {
        return Ok(CycMatrix::identity(0, level));
    }
    Ok(CycMatrix::from_rows(out).embed(level))
}

fn parse_vector(v: &Value, level: u32, path: &str) -> Result<CycVector, CliError> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, e)| parse_cyclotomic(e, level, &format!("{path}[{i}]")).map(|x| x.embed(level)))
        .collect()
}

fn parse_point(v: &Value, path: &str) -> Result<Vec<Rational>, CliError> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, e)| parse_rational(e, &format!("{path}[{i}]")))
        .collect()
}

/// Products of generator powers in the mixed-radix order of `∏ ℤ/nᵢ`.
fn abelian_matrices(group: &FiniteGroup, invariants: &[u64], gens: &[CycMatrix]) -> Vec<CycMatrix> {
    let n = gens.first().map_or(0, CycMatrix::rows);
    let level = gens.first().map_or(1, CycMatrix::level);
    group
        .elements()
        .map(|e| {
            let coords = orbicoh_core::group::abelian_coords(invariants, e);
            let mut m = CycMatrix::identity(n, level);
            for (g, &c) in gens.iter().zip(&coords) {
                for _ in 0..c {
                    m = &m * g;
                }
            }
            m
        })
        .collect()
}

impl Problem {
    pub fn parse(text: &str) -> Result<Problem, CliError> {
        let doc: Value =
            serde_json::from_str(text).map_err(|e| CliError::Input(format!("invalid JSON: {e}")))?;
        let obj = doc
            .as_object()
            .ok_or_else(|| bad("$", "expected an object"))?;
        for key in obj.keys() {
            if !["name", "description", "group", "action", "cocycle", "local_systems"].contains(&key.as_str()) {
                return Err(bad("$", format!("unknown field {key:?}")));
            }
        }
        let name = obj.get("name").and_then(Value::as_str).map(str::to_owned);

        let action = obj.get("action");
        let (group, invariants, matrices, level) = Self::parse_group(obj.get("group"), action)?;
        let quotient = match (action, matrices) {
            (Some(a), Some(m)) => Some(Self::build_quotient(a, group.clone(), m, level)?),
            _ => None,
        };
        let cocycle = obj
            .get("cocycle")
            .map(|c| Self::parse_cocycle(c, &group, invariants.as_deref()))
            .transpose()?;
        let raw_local_systems = match obj.get("local_systems") {
            None => BTreeMap::new(),
            Some(Value::Object(m)) => m.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
            Some(_) => return Err(bad("local_systems", "expected an object keyed by name")),
        };
        if !raw_local_systems.is_empty() && quotient.is_none() {
            return Err(bad("local_systems", "local systems need an action"));
        }
        Ok(Problem {
            name,
            group,
            invariants,
            quotient,
            cocycle,
            raw_local_systems,
        })
    }

    #[allow(clippy::type_complexity)]
    fn parse_group(
        group: Option<&Value>,
        action: Option<&Value>,
    ) -> Result<(FiniteGroup, Option<Vec<u64>>, Option<Vec<CycMatrix>>, u32), CliError> {
        let level = match action.and_then(|a| a.get("level")) {
            Some(v) => u32::try_from(as_u64(v, "action.level")?)
                .ok()
                .filter(|&l| l > 0)
                .ok_or_else(|| bad("action.level", "must be a positive integer"))?,
            None => 1,
        };
        let generators = action
            .and_then(|a| a.get("generators"))
            .map(|g| {
                as_array(g, "action.generators")?
                    .iter()
                    .enumerate()
                    .map(|(i, m)| parse_matrix(m, level, &format!("action.generators[{i}]")))
                    .collect::<Result<Vec<_>, _>>()
            })
            .transpose()?;
        let matrices = action
            .and_then(|a| a.get("matrices"))
            .map(|g| {
                as_array(g, "action.matrices")?
                    .iter()
                    .enumerate()
                    .map(|(i, m)| parse_matrix(m, level, &format!("action.matrices[{i}]")))
                    .collect::<Result<Vec<_>, _>>()
            })
            .transpose()?;
        if action.is_some() && generators.is_some() == matrices.is_some() {
            return Err(bad("action", "give exactly one of \"generators\" and \"matrices\""));
        }

        let Some(group) = group else {
            let Some(gens) = generators else {
                return Err(bad("group", "required unless the action lists generators"));
            };
            let (g, m) = close_matrix_group(&gens, MAX_GENERATED_ORDER)
                .map_err(|e| bad("action.generators", e))?;
            return Ok((g, None, Some(m), level));
        };

        if let Some(inv) = group.get("abelian") {
            let inv: Vec<u64> = as_array(inv, "group.abelian")?
                .iter()
                .enumerate()
                .map(|(i, x)| as_u64(x, &format!("group.abelian[{i}]")))
                .collect::<Result<_, _>>()?;
            if inv.iter().any(|&n| n == 0) {
                return Err(bad("group.abelian", "invariants must be positive"));
            }
            let g = FiniteGroup::abelian(&inv).map_err(|e| bad("group.abelian", e))?;
            let m = match (generators, matrices) {
                (Some(gens), _) => {
                    if gens.len() != inv.len() {
                        return Err(bad(
                            "action.generators",
                            format!("need one generator per cyclic factor ({})", inv.len()),
                        ));
                    }
                    Some(abelian_matrices(&g, &inv, &gens))
                }
                (None, m) => m,
            };
            return Ok((g, Some(inv), m, level));
        }
        if let Some(table) = group.get("cayley") {
            let rows: Vec<Vec<usize>> = as_array(table, "group.cayley")?
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    as_array(r, &format!("group.cayley[{i}]"))?
                        .iter()
                        .enumerate()
                        .map(|(j, x)| as_index(x, &format!("group.cayley[{i}][{j}]")))
                        .collect()
                })
                .collect::<Result<_, _>>()?;
            let g = FiniteGroup::from_table(&rows).map_err(|e| bad("group.cayley", e))?;
            if generators.is_some() {
                return Err(bad("action", "a Cayley-table group needs one matrix per element"));
            }
            return Ok((g, None, matrices, level));
        }
        Err(bad("group", "expected {\"abelian\": [...]} or {\"cayley\": [[...]]}"))
    }

    fn build_quotient(
        action: &Value,
        group: FiniteGroup,
        matrices: Vec<CycMatrix>,
        level: u32,
    ) -> Result<Quotient, CliError> {
        let kind = action.get("kind").and_then(Value::as_str);
        match kind {
            Some("linear") => {
                if action.get("lattice").is_some() {
                    return Err(bad("action.lattice", "a linear action takes no lattice"));
                }
                validate_linear(group, matrices)
                    .map(Quotient::Linear)
                    .map_err(|e| bad("action", e))
            }
            Some("torus") => {
                let lattice = action
                    .get("lattice")
                    .ok_or_else(|| bad("action.lattice", "required for a torus action"))?;
                let lattice = as_array(lattice, "action.lattice")?
                    .iter()
                    .enumerate()
                    .map(|(i, v)| parse_vector(v, level, &format!("action.lattice[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                validate_torus(group, matrices, lattice)
                    .map(Quotient::Torus)
                    .map_err(|e| bad("action", e))
            }
            _ => Err(bad("action.kind", "expected \"linear\" or \"torus\"")),
        }
    }

    fn parse_cocycle(
        v: &Value,
        group: &FiniteGroup,
        invariants: Option<&[u64]>,
    ) -> Result<Cocycle, CliError> {
        if let Some(c) = v.get("abelian_bilinear") {
            let Some(inv) = invariants else {
                return Err(bad("cocycle.abelian_bilinear", "needs a group given by abelian invariants"));
            };
            let coeffs: Vec<Vec<u64>> = as_array(c, "cocycle.abelian_bilinear")?
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    as_array(r, &format!("cocycle.abelian_bilinear[{i}]"))?
                        .iter()
                        .enumerate()
                        .map(|(j, x)| as_u64(x, &format!("cocycle.abelian_bilinear[{i}][{j}]")))
                        .collect()
                })
                .collect::<Result<_, _>>()?;
            return abelian_cocycle(inv, &coeffs).map_err(|e| bad("cocycle.abelian_bilinear", e));
        }
        if let Some(t) = v.get("table") {
            let rows: Vec<Vec<Phase>> = as_array(t, "cocycle.table")?
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    as_array(r, &format!("cocycle.table[{i}]"))?
                        .iter()
                        .enumerate()
                        .map(|(j, x)| parse_rational(x, &format!("cocycle.table[{i}][{j}]")).map(Phase::new))
                        .collect()
                })
                .collect::<Result<_, _>>()?;
            return Cocycle::new(group, rows).map_err(|e| bad("cocycle.table", e));
        }
        Err(bad("cocycle", "expected {\"abelian_bilinear\": ...} or {\"table\": ...}"))
    }

    pub fn local_system_names(&self) -> Vec<&str> {
        self.raw_local_systems.keys().map(String::as_str).collect()
    }

    pub fn quotient(&self) -> Result<&Quotient, CliError> {
        self.quotient
            .as_ref()
            .ok_or_else(|| CliError::Input("this command needs an \"action\"".into()))
    }

    /// Builds the named local system. Each record names a sector by any
    /// element of its class, the orbit by index or by a point on one of its
    /// components, and character values on stabilizer elements (at least
    /// enough to generate the stabilizer).
    pub fn local_system(&self, name: &str) -> Result<InnerLocalSystem, CliError> {
        let raw = self
            .raw_local_systems
            .get(name)
            .ok_or_else(|| CliError::Input(format!("no local system named {name:?}")))?;
        let q = self.quotient()?.global();
        let base = format!("local_systems.{name}");
        let mut given = BTreeMap::new();
        for (i, rec) in as_array(raw, &base)?.iter().enumerate() {
            let path = format!("{base}[{i}]");
            let elem = as_index(rec.get("class").unwrap_or(&Value::Null), &format!("{path}.class"))?;
            if elem >= q.group().order() {
                return Err(bad(&format!("{path}.class"), "element index out of range"));
            }
            let class = q.group().class_index(elem);
            let orbit = match (rec.get("orbit"), rec.get("point")) {
                (Some(o), None) => as_index(o, &format!("{path}.orbit"))?,
                (None, Some(p)) => {
                    let point = parse_point(p, &format!("{path}.point"))?;
                    orbit_of_point(q, class, &point).map_err(|e| bad(&path, e))?
                }
                _ => return Err(bad(&path, "give exactly one of \"orbit\" and \"point\"")),
            };
            let stabilizer = &q
                .sectors()
                .get(class)
                .and_then(|s| s.orbits.get(orbit))
                .ok_or_else(|| bad(&path, LocalSystemError::UnknownOrbit { class, orbit }))?
                .stabilizer;
            let values = rec
                .get("character")
                .and_then(Value::as_object)
                .ok_or_else(|| bad(&format!("{path}.character"), "expected an object element → phase"))?;
            let mut partial = BTreeMap::new();
            for (k, v) in values {
                let p = format!("{path}.character.{k}");
                let g: usize = k.parse().map_err(|_| bad(&p, "keys are element indices"))?;
                partial.insert(g, Phase::new(parse_rational(v, &p)?));
            }
            let chi = extend_character(q.group(), stabilizer, &partial)
                .ok_or_else(|| bad(&path, LocalSystemError::Underdetermined { class, orbit }))?;
            if given.insert((class, orbit), chi).is_some() {
                return Err(bad(&path, "orbit assigned twice"));
            }
        }
        InnerLocalSystem::new(q, given).map_err(|e| bad(&base, e))
    }
}
