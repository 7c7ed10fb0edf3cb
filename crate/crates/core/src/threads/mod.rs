//! Finite-state threads given as linear recursive specifications.
//!
//! Every state has one of three bodies: `D` (deadlock), `S` (termination) or
//! a postconditional composition `<then> a <else>` that performs `a` and
//! continues with `then` on a positive reply and with `else` on a negative
//! one. Tau steps always reply positively, so their two branches coincide.

mod bisim;
mod text;

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::rc::Rc;

use crate::error::{Error, Result};

pub use bisim::{bisimilar, minimize};
pub use text::{parse_thread, to_dot};

/// An action: the internal `tau` or a request `focus.method`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Action {
    Tau,
    Basic { focus: String, method: String },
}

impl Action {
    pub fn basic(focus: impl Into<String>, method: impl Into<String>) -> Self {
        Action::Basic {
            focus: focus.into(),
            method: method.into(),
        }
    }

    pub fn focus(&self) -> Option<&str> {
        match self {
            Action::Tau => None,
            Action::Basic { focus, .. } => Some(focus),
        }
    }

    pub fn is_tau(&self) -> bool {
        matches!(self, Action::Tau)
    }
}

impl From<&crate::syntax::BasicInstruction> for Action {
    fn from(b: &crate::syntax::BasicInstruction) -> Self {
        Action::basic(b.focus(), b.method())
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Tau => f.write_str("tau"),
            Action::Basic { focus, method } => write!(f, "{focus}.{method}"),
        }
    }
}

/// Index of a state within its [`ThreadSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Body {
    Deadlock,
    Stop,
    Post {
        action: Action,
        then: StateId,
        otherwise: StateId,
    },
}

impl Body {
    pub fn post(action: Action, then: StateId, otherwise: StateId) -> Self {
        let otherwise = if action.is_tau() { then } else { otherwise };
        Body::Post {
            action,
            then,
            otherwise,
        }
    }

    /// `a ∘ next`: both branches continue with `next`.
    pub fn prefix(action: Action, next: StateId) -> Self {
        Body::Post {
            action,
            then: next,
            otherwise: next,
        }
    }

    pub fn tau(next: StateId) -> Self {
        Body::prefix(Action::Tau, next)
    }

    fn successors(&self) -> impl Iterator<Item = StateId> {
        let pair = match self {
            Body::Post {
                then, otherwise, ..
            } => Some([*then, *otherwise]),
            _ => None,
        };
        pair.into_iter().flatten()
    }

    fn map_states(&self, f: impl Fn(StateId) -> StateId) -> Body {
        match self {
            Body::Post {
                action,
                then,
                otherwise,
            } => Body::Post {
                action: action.clone(),
                then: f(*then),
                otherwise: f(*otherwise),
            },
            other => other.clone(),
        }
    }
}

/// A validated linear recursive specification. The root is always state 0,
/// every state is reachable from it, and states are numbered in
/// breadth-first order (then-branch before else-branch).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreadSpec {
    names: Vec<String>,
    bodies: Vec<Body>,
}

impl ThreadSpec {
    /// The one-state thread with the given body, which must not refer to
    /// other states.
    pub fn constant(body: Body) -> Self {
        let mut b = ThreadBuilder::new();
        let x = b.state("X0");
        b.define(x, body.map_states(|_| x)).unwrap();
        b.build(x).unwrap()
    }

    pub fn stop() -> Self {
        Self::constant(Body::Stop)
    }

    pub fn deadlock() -> Self {
        Self::constant(Body::Deadlock)
    }

    pub fn root(&self) -> StateId {
        StateId(0)
    }

    pub fn len(&self) -> usize {
        self.bodies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bodies.is_empty()
    }

    pub fn body(&self, id: StateId) -> &Body {
        &self.bodies[id.0]
    }

    pub fn name(&self, id: StateId) -> &str {
        &self.names[id.0]
    }

    pub fn states(&self) -> impl Iterator<Item = (StateId, &Body)> {
        self.bodies.iter().enumerate().map(|(i, b)| (StateId(i), b))
    }

    /// All actions occurring in reachable states.
    pub fn actions(&self) -> impl Iterator<Item = &Action> {
        self.bodies.iter().filter_map(|b| match b {
            Body::Post { action, .. } => Some(action),
            _ => None,
        })
    }

    /// Same spec with states renamed `{prefix}0`, `{prefix}1`, ...
    pub fn renamed(&self, prefix: &str) -> ThreadSpec {
        ThreadSpec {
            names: (0..self.len()).map(|i| format!("{prefix}{i}")).collect(),
            bodies: self.bodies.clone(),
        }
    }
}

impl fmt::Display for ThreadSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        text::write_spec(self, f)
    }
}

impl std::str::FromStr for ThreadSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_thread(s, T1Policy::Reject)
    }
}

/// Incremental construction of a [`ThreadSpec`] with named states.
#[derive(Debug, Default)]
pub struct ThreadBuilder {
    names: Vec<String>,
    bodies: Vec<Option<Body>>,
    index: HashMap<String, StateId>,
}

impl ThreadBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// The state called `name`, created on first use.
    pub fn state(&mut self, name: &str) -> StateId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = StateId(self.names.len());
        self.names.push(name.to_string());
        self.bodies.push(None);
        self.index.insert(name.to_string(), id);
        id
    }

    pub fn is_defined(&self, id: StateId) -> bool {
        self.bodies[id.0].is_some()
    }

    pub fn define(&mut self, id: StateId, body: Body) -> Result<()> {
        let slot = &mut self.bodies[id.0];
        if slot.is_some() {
            return Err(Error::DuplicateState(self.names[id.0].clone()));
        }
        *slot = Some(body);
        Ok(())
    }

    /// Enforces T1 by overwriting the else-branch of tau steps, prunes
    /// unreachable states and renumbers breadth-first from `root`.
    pub fn build(self, root: StateId) -> Result<ThreadSpec> {
        let mut bodies = Vec::with_capacity(self.bodies.len());
        for (name, body) in self.names.iter().zip(self.bodies) {
            let body = body.ok_or_else(|| Error::DanglingState(name.clone()))?;
            bodies.push(match body {
                Body::Post {
                    action: Action::Tau,
                    then,
                    ..
                } => Body::tau(then),
                other => other,
            });
        }
        Ok(reachable(&self.names, &bodies, root))
    }
}

fn reachable(names: &[String], bodies: &[Body], root: StateId) -> ThreadSpec {
    let mut order = Vec::new();
    let mut new_id = vec![None; bodies.len()];
    let mut queue = VecDeque::from([root]);
    new_id[root.0] = Some(StateId(0));
    let mut assigned = 1;
    while let Some(s) = queue.pop_front() {
        order.push(s);
        for t in bodies[s.0].successors() {
            if new_id[t.0].is_none() {
                new_id[t.0] = Some(StateId(assigned));
                assigned += 1;
                queue.push_back(t);
            }
        }
    }
    ThreadSpec {
        names: order.iter().map(|s| names[s.0].clone()).collect(),
        bodies: order
            .iter()
            .map(|s| bodies[s.0].map_states(|t| new_id[t.0].unwrap()))
            .collect(),
    }
}

/// What [`validate`] does with a tau step whose branches differ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum T1Policy {
    #[default]
    Reject,
    Normalize,
}

/// Right-hand side of an equation, with states referred to by name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawBody {
    Deadlock,
    Stop,
    Post {
        action: Action,
        then: String,
        otherwise: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub name: String,
    pub body: RawBody,
}

/// Checks a list of equations (the first one defines the root), and returns
/// the spec restricted to the states reachable from the root.
pub fn validate(equations: &[Equation], policy: T1Policy) -> Result<ThreadSpec> {
    let first = equations.first().ok_or(Error::EmptySpec)?;
    let mut b = ThreadBuilder::new();
    let root = b.state(&first.name);
    for eq in equations {
        let id = b.state(&eq.name);
        if b.is_defined(id) {
            return Err(Error::DuplicateState(eq.name.clone()));
        }
        let body = match &eq.body {
            RawBody::Deadlock => Body::Deadlock,
            RawBody::Stop => Body::Stop,
            RawBody::Post {
                action,
                then,
                otherwise,
            } => {
                if action.is_tau() && then != otherwise && policy == T1Policy::Reject {
                    return Err(Error::T1Violation(eq.name.clone()));
                }
                let then = b.state(then);
                let otherwise = b.state(otherwise);
                Body::post(action.clone(), then, otherwise)
            }
        };
        b.define(id, body)?;
    }
    b.build(root)
}

/// Number of residual threads: reachable states of the (pruned) spec.
pub fn residual_count(spec: &ThreadSpec) -> usize {
    spec.len()
}

/// A finite thread: the result of projecting to a bounded depth.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FiniteThread {
    Deadlock,
    Stop,
    Post(Action, Rc<FiniteThread>, Rc<FiniteThread>),
}

impl FiniteThread {
    pub fn depth(&self) -> usize {
        match self {
            FiniteThread::Post(_, l, r) => 1 + l.depth().max(r.depth()),
            _ => 0,
        }
    }

    /// The finite thread as a (tree-shaped, shared) specification.
    pub fn to_spec(&self) -> ThreadSpec {
        fn go(
            t: &Rc<FiniteThread>,
            b: &mut ThreadBuilder,
            seen: &mut HashMap<*const FiniteThread, StateId>,
        ) -> StateId {
            if let Some(&id) = seen.get(&Rc::as_ptr(t)) {
                return id;
            }
            let id = b.state(&format!("N{}", seen.len()));
            seen.insert(Rc::as_ptr(t), id);
            let body = match t.as_ref() {
                FiniteThread::Deadlock => Body::Deadlock,
                FiniteThread::Stop => Body::Stop,
                FiniteThread::Post(a, l, r) => {
                    let l = go(l, b, seen);
                    let r = go(r, b, seen);
                    Body::post(a.clone(), l, r)
                }
            };
            b.define(id, body).unwrap();
            id
        }
        let mut b = ThreadBuilder::new();
        let root = go(&Rc::new(self.clone()), &mut b, &mut HashMap::new());
        b.build(root).unwrap()
    }
}

/// Depth-`n` approximation: `π0(x) = D`, `πn+1(S) = S`, `πn+1(D) = D`,
/// `πn+1(x ⊴ a ⊵ y) = πn(x) ⊴ a ⊵ πn(y)`.
pub fn project(spec: &ThreadSpec, n: usize) -> FiniteThread {
    let mut memo: HashMap<(StateId, usize), Rc<FiniteThread>> = HashMap::new();
    let t = project_state(spec, spec.root(), n, &mut memo);
    Rc::try_unwrap(t).unwrap_or_else(|rc| (*rc).clone())
}

fn project_state(
    spec: &ThreadSpec,
    s: StateId,
    n: usize,
    memo: &mut HashMap<(StateId, usize), Rc<FiniteThread>>,
) -> Rc<FiniteThread> {
    if let Some(t) = memo.get(&(s, n)) {
        return t.clone();
    }
    let t = if n == 0 {
        Rc::new(FiniteThread::Deadlock)
    } else {
        match spec.body(s) {
            Body::Deadlock => Rc::new(FiniteThread::Deadlock),
            Body::Stop => Rc::new(FiniteThread::Stop),
            Body::Post {
                action,
                then,
                otherwise,
            } => {
                let l = project_state(spec, *then, n - 1, memo);
                let r = project_state(spec, *otherwise, n - 1, memo);
                Rc::new(FiniteThread::Post(action.clone(), l, r))
            }
        }
    };
    memo.insert((s, n), t.clone());
    t
}

/// Removes tau steps: `τ(τ ∘ x) = τ(x)`, and a state whose tau chase never
/// reaches a non-tau body becomes `D`.
pub fn abstract_tau(spec: &ThreadSpec) -> ThreadSpec {
    let n = spec.len();
    // None: diverges
    let mut resolved: Vec<Option<Option<StateId>>> = vec![None; n];
    for start in 0..n {
        if resolved[start].is_some() {
            continue;
        }
        let mut path = Vec::new();
        let mut on_path = vec![false; n];
        let mut cur = StateId(start);
        let result = loop {
            if let Some(r) = resolved[cur.0] {
                break r;
            }
            match spec.body(cur) {
                Body::Post {
                    action: Action::Tau,
                    then,
                    ..
                } => {
                    if on_path[cur.0] {
                        break None;
                    }
                    on_path[cur.0] = true;
                    path.push(cur);
                    cur = *then;
                }
                _ => break Some(cur),
            }
        };
        for s in path {
            resolved[s.0] = Some(result);
        }
        resolved[start] = Some(result);
    }

    let bodies: Vec<Body> = (0..n)
        .map(|i| match resolved[i].unwrap() {
            None => Body::Deadlock,
            Some(target) => spec.body(target).clone(),
        })
        .collect();
    reachable(&spec.names, &bodies, spec.root())
}
