//! Services as deterministic state machines, counters, and thread-service
//! composition.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::threads::{Action, Body, StateId, ThreadBuilder, ThreadSpec};

/// A service's answer to a request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reply {
    True,
    False,
    Blocked,
}

impl fmt::Display for Reply {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reply::True => "T",
            Reply::False => "F",
            Reply::Blocked => "B",
        })
    }
}

/// A service given by a state, an effect function and a yield function.
///
/// The value itself is the state; equal values must behave identically, so
/// they double as memoization keys during composition. Once a reply is
/// [`Reply::Blocked`], every later reply must be too.
pub trait Service: Clone + Eq + Hash {
    /// Processes `method`: the successor state and the reply.
    fn apply(&self, method: &str) -> (Self, Reply);

    /// True if `method` is accepted with a positive reply in this state and
    /// in every state reachable from it through such methods. Composition
    /// uses this to recognise request loops that never end.
    fn accepts_forever(&self, _method: &str) -> bool {
        false
    }
}

/// One processing step, as a free function.
pub fn service_apply<S: Service>(svc: &S, method: &str) -> (S, Reply) {
    svc.apply(method)
}

/// The counter family `Cnt_s` with methods `clr`, `inc`, `dec`, `isz`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Counter {
    Content(u64),
    Undefined,
}

impl Counter {
    pub fn new(init: u64) -> Self {
        Counter::Content(init)
    }

    pub fn content(&self) -> Option<u64> {
        match self {
            Counter::Content(k) => Some(*k),
            Counter::Undefined => None,
        }
    }
}

/// `Cnt_init`, the counter starting at zero.
pub fn counter_new(init: u64) -> Counter {
    Counter::new(init)
}

impl Service for Counter {
    fn apply(&self, method: &str) -> (Self, Reply) {
        let Counter::Content(k) = *self else {
            return (Counter::Undefined, Reply::Blocked);
        };
        match (method, k) {
            ("clr", _) => (Counter::Content(0), Reply::True),
            ("inc", k) => (Counter::Content(k + 1), Reply::True),
            ("dec", 0) => (Counter::Content(0), Reply::False),
            ("dec", k) => (Counter::Content(k - 1), Reply::True),
            ("isz", 0) => (Counter::Content(0), Reply::True),
            ("isz", k) => (Counter::Content(k), Reply::False),
            _ => (Counter::Undefined, Reply::Blocked),
        }
    }

    fn accepts_forever(&self, method: &str) -> bool {
        matches!(self, Counter::Content(_)) && matches!(method, "clr" | "inc")
    }
}

impl fmt::Display for Counter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Counter::Content(k) => write!(f, "Cnt_{k}"),
            Counter::Undefined => f.write_str("Cnt_undef"),
        }
    }
}

/// Upper bound on the number of product states a composition may create.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    max_states: usize,
}

impl Budget {
    pub fn new(max_states: usize) -> Self {
        assert!(max_states > 0, "budget must be positive");
        Budget { max_states }
    }

    pub fn max_states(&self) -> usize {
        self.max_states
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(1_000_000)
    }
}

/// Result of [`compose_traced`]: the composed thread together with every
/// service state that occurred in the product.
#[derive(Debug, Clone)]
pub struct Composition<S> {
    pub thread: ThreadSpec,
    pub service_states: Vec<S>,
}

/// `spec /focus svc`: every `focus.m` action is processed by the service and
/// turned into a tau step (or deadlock when the service blocks); other
/// actions pass through.
pub fn compose<S: Service>(
    spec: &ThreadSpec,
    focus: &str,
    svc: &S,
    budget: Budget,
) -> Result<ThreadSpec> {
    compose_traced(spec, focus, svc, budget).map(|c| c.thread)
}

pub fn compose_traced<S: Service>(
    spec: &ThreadSpec,
    focus: &str,
    svc: &S,
    budget: Budget,
) -> Result<Composition<S>> {
    let mut b = ThreadBuilder::new();
    let mut index: HashMap<(StateId, S), StateId> = HashMap::new();
    let mut service_states = Vec::new();
    let mut queue = VecDeque::new();

    let mut intern = |thread_state: StateId,
                      svc: S,
                      b: &mut ThreadBuilder,
                      queue: &mut VecDeque<(StateId, S, StateId)>|
     -> Result<StateId> {
        if let Some(&id) = index.get(&(thread_state, svc.clone())) {
            return Ok(id);
        }
        if index.len() >= budget.max_states() {
            return Err(Error::BudgetExceeded(budget.max_states()));
        }
        let id = b.state(&format!("C{}", index.len()));
        index.insert((thread_state, svc.clone()), id);
        service_states.push(svc.clone());
        queue.push_back((thread_state, svc, id));
        Ok(id)
    };

    let root = intern(spec.root(), svc.clone(), &mut b, &mut queue)?;
    while let Some((x, s, id)) = queue.pop_front() {
        if diverges(spec, x, focus, &s) {
            b.define(id, Body::tau(id))?;
            continue;
        }
        let body = match spec.body(x) {
            Body::Stop => Body::Stop,
            Body::Deadlock => Body::Deadlock,
            Body::Post {
                action,
                then,
                otherwise,
            } => match action {
                Action::Basic { focus: g, method } if g == focus => {
                    let (next, reply) = s.apply(method);
                    match reply {
                        Reply::True => Body::tau(intern(*then, next, &mut b, &mut queue)?),
                        Reply::False => Body::tau(intern(*otherwise, next, &mut b, &mut queue)?),
                        Reply::Blocked => Body::Deadlock,
                    }
                }
                _ => {
                    let t = intern(*then, s.clone(), &mut b, &mut queue)?;
                    let e = intern(*otherwise, s.clone(), &mut b, &mut queue)?;
                    Body::post(action.clone(), t, e)
                }
            },
        };
        b.define(id, body)?;
    }
    Ok(Composition {
        thread: b.build(root)?.renamed("X"),
        service_states,
    })
}

// Whether from `x` the thread only ever performs tau steps and requests the
// service accepts forever, so the composition is an endless tau sequence
// whatever the exact service state.
fn diverges<S: Service>(spec: &ThreadSpec, x: StateId, focus: &str, svc: &S) -> bool {
    let mut seen = vec![false; spec.len()];
    let mut cur = x;
    loop {
        if seen[cur.0] {
            return true;
        }
        seen[cur.0] = true;
        match spec.body(cur) {
            Body::Post {
                action: Action::Tau,
                then,
                ..
            } => cur = *then,
            Body::Post {
                action: Action::Basic { focus: g, method },
                then,
                ..
            } if g == focus && svc.accepts_forever(method) => cur = *then,
            _ => return false,
        }
    }
}
