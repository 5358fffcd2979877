//! Counterexample traces and their text format.
//!
//! ```text
//! # model: broken_dekker
//! # procs: 2
//! req(0)
//! req(1)
//! enter(0)
//! enter(1)
//! ```

use std::fmt;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub transition: String,
    /// Process indices bound to the transition's parameters.
    pub params: Vec<usize>,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.params.iter().map(|p| p.to_string()).collect();
        write!(f, "{}({})", self.transition, ps.join(","))
    }
}

/// A run of the instance with `nprocs` processes, starting from some initial
/// state and ending in an unsafe one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Trace {
    pub model: String,
    pub nprocs: usize,
    pub steps: Vec<Step>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Trace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("# model: {}\n# procs: {}\n", self.model, self.nprocs);
        for s in &self.steps {
            out.push_str(&s.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Trace, TraceError> {
        let mut model = None;
        let mut nprocs = None;
        let mut steps = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let err = |msg: &str| TraceError::Parse {
                line: i + 1,
                msg: msg.to_string(),
            };
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let rest = rest.trim();
                if let Some(m) = rest.strip_prefix("model:") {
                    model = Some(m.trim().to_string());
                } else if let Some(n) = rest.strip_prefix("procs:") {
                    nprocs = Some(n.trim().parse::<usize>().map_err(|_| err("bad process count"))?);
                }
                continue;
            }
            let (name, args) = line.split_once('(').ok_or_else(|| err("expected `name(args)`"))?;
            let args = args.strip_suffix(')').ok_or_else(|| err("missing `)`"))?;
            let params = if args.trim().is_empty() {
                Vec::new()
            } else {
                args.split(',')
                    .map(|a| a.trim().parse::<usize>().map_err(|_| err("bad process index")))
                    .collect::<Result<_, _>>()?
            };
            steps.push(Step {
                transition: name.trim().to_string(),
                params,
            });
        }
        let nprocs = nprocs.ok_or(TraceError::Parse {
            line: 1,
            msg: "missing `# procs:` header".into(),
        })?;
        Ok(Trace {
            model: model.unwrap_or_default(),
            nprocs,
            steps,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let t = Trace {
            model: "m".into(),
            nprocs: 2,
            steps: vec![
                Step { transition: "req".into(), params: vec![0] },
                Step { transition: "exit".into(), params: vec![1, 0] },
                Step { transition: "tick".into(), params: vec![] },
            ],
        };
        let text = t.to_text();
        assert_eq!(text, "# model: m\n# procs: 2\nreq(0)\nexit(1,0)\ntick()\n");
        assert_eq!(Trace::parse(&text).unwrap(), t);
    }

    #[test]
    fn parse_errors() {
        assert!(Trace::parse("req(0)\n").is_err());
        assert!(matches!(
            Trace::parse("# procs: 2\nreq(x)\n"),
            Err(TraceError::Parse { line: 2, .. })
        ));
    }
}
