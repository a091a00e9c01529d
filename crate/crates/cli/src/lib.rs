//! Command layer of the `orbicoh` tool: reads a problem file, runs one
//! computation and renders a deterministic report.

pub mod problem;
pub mod report;

use std::collections::BTreeMap;

use orbicoh_core::exact::fmt_rational;
use orbicoh_core::torsion::{abelian_h2, alpha_regular_classes, twisted_center};
use orbicoh_core::{
    duality_check, from_cocycle, orbifold_hodge, trivial_system, verify, Cocycle, GlobalQuotient,
    HodgeTable, InnerLocalSystem, OrbifoldError, SpaceKind, VerificationReport,
};
use sha2::{Digest, Sha256};
use thiserror::Error;

use problem::{Problem, Quotient};
use report::Node;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Internal(_) => 2,
        }
    }
}

impl From<OrbifoldError> for CliError {
    fn from(e: OrbifoldError) -> Self {
        match e {
            OrbifoldError::NonIntegralDimension { .. } => CliError::Internal(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Sectors,
    Betti,
    Hodge,
    Ring,
    H2,
    Regular,
    Center,
    VerifyLs,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Sectors => "sectors",
            Command::Betti => "betti",
            Command::Hodge => "hodge",
            Command::Ring => "ring",
            Command::H2 => "h2",
            Command::Regular => "regular",
            Command::Center => "center",
            Command::VerifyLs => "verify-ls",
        }
    }
}

/// Which twist to apply: none, the one induced by the file's cocycle, or a
/// named local system from the file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum Twist {
    #[default]
    Trivial,
    CocycleInduced,
    LocalSystem(String),
}

impl Twist {
    fn label(&self) -> String {
        match self {
            Twist::Trivial => "trivial".into(),
            Twist::CocycleInduced => "cocycle-induced".into(),
            Twist::LocalSystem(name) => format!("local-system:{name}"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Result of one invocation: what to print and the process exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn input_digest(input: &str) -> String {
    format!("{:x}", Sha256::digest(input.as_bytes()))
}

/// Runs `command` on the problem text and renders the full report.
pub fn execute(command: Command, input: &str, twist: &Twist, format: Format) -> Outcome {
    match run(command, input, twist) {
        Ok(result) => {
            let report = Node::map([
                ("command", Node::str(command.name())),
                ("input_sha256", Node::str(input_digest(input))),
                ("twist", Node::str(twist.label())),
                ("result", result),
            ]);
            let stdout = match format {
                Format::Json => report::to_json_string(&report),
                Format::Text => report.to_text(),
            };
            Outcome {
                exit_code: 0,
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => Outcome {
            exit_code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

/// Computes the result payload of `command`.
pub fn run(command: Command, input: &str, twist: &Twist) -> Result<Node, CliError> {
    let problem = Problem::parse(input)?;
    let alpha = cocycle_for(&problem, twist, command)?;
    match command {
        Command::Validate => validate(&problem),
        Command::Sectors => Ok(sectors(problem.quotient()?.global())),
        Command::Betti | Command::Hodge => {
            let q = problem.quotient()?.global();
            let l = local_system_for(&problem, twist)?;
            check_system(q, &l)?;
            let (h, b) = orbifold_hodge(q, &l)?;
            let mut out = BTreeMap::from([
                ("betti".to_owned(), degree_map(b.entries().iter().map(|(d, n)| (fmt_rational(d), *n)))),
                ("total".to_owned(), Node::int(b.total())),
            ]);
            if command == Command::Hodge {
                out.insert("hodge".into(), hodge_node(&h));
                if q.kind() == SpaceKind::Torus {
                    out.insert("duality".into(), Node::Bool(duality_check(&h, q.complex_dim())));
                }
            }
            Ok(Node::Map(out))
        }
        Command::Ring => ring(&problem, &alpha),
        Command::H2 => {
            let inv = problem.invariants.as_ref().ok_or_else(|| {
                CliError::Input("h2: the group must be given by abelian invariants".into())
            })?;
            let h2: Vec<usize> = abelian_h2(inv).into_iter().map(|x| x as usize).collect();
            Ok(Node::map([
                ("group", Node::list(inv.iter().map(|&n| Node::int(n)))),
                ("h2", Node::indices(&h2)),
                ("order", Node::int(h2.iter().product::<usize>())),
            ]))
        }
        Command::Regular => {
            let classes = alpha_regular_classes(&problem.group, &alpha);
            Ok(Node::map([
                ("count", Node::int(classes.len())),
                (
                    "classes",
                    Node::list(classes.iter().map(|c| {
                        Node::map([
                            ("representative", Node::int(c.representative)),
                            ("members", Node::indices(&c.members)),
                        ])
                    })),
                ),
            ]))
        }
        Command::Center => Ok(center(&problem, &alpha)),
        Command::VerifyLs => {
            let q = problem.quotient()?.global();
            let l = local_system_for(&problem, twist)?;
            Ok(verification_node(&verify(q, &l)))
        }
    }
}

fn cocycle_for(problem: &Problem, twist: &Twist, command: Command) -> Result<Cocycle, CliError> {
    match twist {
        Twist::CocycleInduced => problem
            .cocycle
            .clone()
            .ok_or_else(|| CliError::Input("--cocycle-induced: the file has no \"cocycle\"".into())),
        Twist::LocalSystem(_)
            if !matches!(command, Command::Betti | Command::Hodge | Command::VerifyLs) =>
        {
            Err(CliError::Input(format!(
                "--local-system does not apply to {}",
                command.name()
            )))
        }
        _ => Ok(Cocycle::trivial(&problem.group)),
    }
}

fn local_system_for(problem: &Problem, twist: &Twist) -> Result<InnerLocalSystem, CliError> {
    let q = problem.quotient()?.global();
    match twist {
        Twist::Trivial => Ok(trivial_system(q)),
        Twist::CocycleInduced => Ok(from_cocycle(q, &cocycle_for(problem, twist, Command::Betti)?)),
        Twist::LocalSystem(name) => problem.local_system(name),
    }
}

/// Refuses to compute with a system that is not an inner local system.
fn check_system(q: &GlobalQuotient, l: &InnerLocalSystem) -> Result<(), CliError> {
    let report = verify(q, l);
    match report.violations.first() {
        None => Ok(()),
        Some(v) => Err(CliError::Input(format!("not an inner local system: {v}"))),
    }
}

fn degree_map(entries: impl IntoIterator<Item = (String, u64)>) -> Node {
    Node::map(entries.into_iter().map(|(k, n)| (k, Node::int(n))))
}

fn hodge_node(h: &HodgeTable) -> Node {
    degree_map(
        h.entries()
            .iter()
            .map(|((p, q), n)| (format!("{},{}", fmt_rational(p), fmt_rational(q)), *n)),
    )
}

fn validate(problem: &Problem) -> Result<Node, CliError> {
    let g = &problem.group;
    let mut group = BTreeMap::from([
        ("order".to_owned(), Node::int(g.order())),
        ("classes".to_owned(), Node::int(g.conjugacy_classes().len())),
        ("abelian".to_owned(), Node::Bool(g.is_abelian())),
    ]);
    if let Some(inv) = &problem.invariants {
        group.insert("invariants".into(), Node::list(inv.iter().map(|&n| Node::int(n))));
    }
    let mut out = BTreeMap::from([("group".to_owned(), Node::Map(group))]);
    if let Some(q) = &problem.quotient {
        let gq = q.global();
        let mut action = BTreeMap::from([
            ("dim".to_owned(), Node::int(gq.complex_dim())),
            ("level".to_owned(), Node::int(gq.level())),
        ]);
        match q {
            Quotient::Linear(x) => {
                action.insert("kind".into(), Node::str("linear"));
                action.insert("special_linear".into(), Node::Bool(x.is_special_linear()));
            }
            Quotient::Torus(_) => {
                action.insert("kind".into(), Node::str("torus"));
            }
        }
        out.insert("action".into(), Node::Map(action));
    }
    if let Some(c) = &problem.cocycle {
        out.insert(
            "cocycle".into(),
            Node::map([
                ("trivial", Node::Bool(c.is_trivial())),
                ("level", Node::int(c.level())),
            ]),
        );
    }
    let mut systems = BTreeMap::new();
    for name in problem.local_system_names() {
        let l = problem.local_system(name)?;
        let nontrivial = l.assignments().values().filter(|c| !c.is_trivial()).count();
        systems.insert(name.to_owned(), Node::map([("nontrivial_orbits", Node::int(nontrivial))]));
    }
    if !systems.is_empty() {
        out.insert("local_systems".into(), Node::Map(systems));
    }
    if let Some(name) = &problem.name {
        out.insert("name".into(), Node::str(name.clone()));
    }
    out.insert("valid".into(), Node::Bool(true));
    Ok(Node::Map(out))
}

fn sectors(q: &GlobalQuotient) -> Node {
    Node::list(q.sectors().iter().map(|s| {
        let mut m = BTreeMap::from([
            ("class".to_owned(), Node::int(s.class.representative)),
            ("members".to_owned(), Node::indices(&s.class.members)),
            ("iota".to_owned(), Node::frac(&s.iota)),
            ("centralizer".to_owned(), Node::indices(s.centralizer.members())),
            ("fixed_dim".to_owned(), Node::int(s.locus.complex_dim())),
            (
                "orbits".to_owned(),
                Node::list(s.orbits.iter().map(|o| {
                    Node::map([
                        ("representative", Node::point(&o.representative)),
                        ("size", Node::int(o.members.len())),
                        ("stabilizer", Node::indices(o.stabilizer.members())),
                    ])
                })),
            ),
        ]);
        if q.kind() == SpaceKind::Torus {
            m.insert("components".into(), Node::Int(s.locus.component_count()));
            m.insert(
                "elementary_divisors".into(),
                Node::list(s.locus.elementary_divisors().iter().cloned().map(Node::Int)),
            );
        }
        Node::Map(m)
    }))
}

fn ring(problem: &Problem, alpha: &Cocycle) -> Result<Node, CliError> {
    let Quotient::Linear(x) = problem.quotient()? else {
        return Err(CliError::Input("ring: only linear quotients are supported".into()));
    };
    let r = x.ring(alpha);
    let rep = |i: usize| x.sectors()[i].class.representative;
    let unit = r.basis(0);
    let unital = r
        .generators
        .iter()
        .all(|&(i, _)| r.multiply(&unit, &r.basis(i)) == r.basis(i) && r.multiply(&r.basis(i), &unit) == r.basis(i));
    let products = r.products.iter().map(|(&(i, j), terms)| {
        Node::map([
            ("left", Node::int(rep(i))),
            ("right", Node::int(rep(j))),
            (
                "terms",
                Node::map(terms.iter().map(|(&k, &c)| (rep(k).to_string(), Node::int(c)))),
            ),
        ])
    });
    Ok(Node::map([
        (
            "generators",
            Node::list(r.generators.iter().map(|(i, iota)| {
                Node::map([("class", Node::int(rep(*i))), ("iota", Node::frac(iota))])
            })),
        ),
        ("products", Node::list(products)),
        ("unital", Node::Bool(unital)),
        ("associative", Node::Bool(r.associativity_violation().is_none())),
        ("graded", Node::Bool(r.grading_violation().is_none())),
    ]))
}

fn center(problem: &Problem, alpha: &Cocycle) -> Node {
    let z = twisted_center(&problem.group, alpha);
    let reps: Vec<usize> = z.basis_classes.iter().map(|c| c.representative).collect();
    Node::map([
        ("dimension", Node::int(z.dimension)),
        (
            "basis",
            Node::list(z.basis_classes.iter().zip(&z.basis).map(|(c, v)| {
                Node::map([
                    ("class", Node::int(c.representative)),
                    ("coefficients", Node::list(v.iter().map(Node::cyclotomic))),
                ])
            })),
        ),
        (
            "structure_constants",
            Node::list(z.structure_constants.iter().map(|(&(i, j, k), c)| {
                Node::map([
                    ("left", Node::int(reps[i])),
                    ("right", Node::int(reps[j])),
                    ("target", Node::int(reps[k])),
                    ("value", Node::cyclotomic(c)),
                ])
            })),
        ),
    ])
}

fn verification_node(report: &VerificationReport) -> Node {
    Node::map([
        ("passed", Node::Bool(report.passed())),
        (
            "violations",
            Node::list(report.violations.iter().map(|v| {
                Node::map([
                    ("axiom", Node::int(v.axiom)),
                    ("elements", Node::indices(&v.elements)),
                    ("point", Node::point(&v.point)),
                    ("element", Node::int(v.element)),
                    ("phase", Node::phase(&v.value)),
                    ("message", Node::str(v.to_string())),
                ])
            })),
        ),
    ])
}
