use serde::{Deserialize, Serialize};

use super::atom_sat;
use crate::formula::Formula;
use crate::kripke::{team_from_names, KripkeStructure, StructureError, Team};

/// The choices behind a positive verdict, mirroring the formula tree.
///
/// Every node records the team it was evaluated at. A split records its two
/// parts as the teams of its children, a classical disjunction the chosen
/// side, a diamond the chosen successor team.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Leaf {
        team: Team,
    },
    And {
        team: Team,
        left: Box<Certificate>,
        right: Box<Certificate>,
    },
    SplitOr {
        team: Team,
        left: Box<Certificate>,
        right: Box<Certificate>,
    },
    ClassicalOr {
        team: Team,
        /// `true` when the left operand was chosen.
        left: bool,
        child: Box<Certificate>,
    },
    Box {
        team: Team,
        child: Box<Certificate>,
    },
    Diamond {
        team: Team,
        successor: Team,
        child: Box<Certificate>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertificateError {
    #[error("certificate does not match the formula at {path}: expected {expected}")]
    ShapeMismatch {
        path: String,
        expected: &'static str,
    },
    #[error("certificate team has the wrong size at {path}")]
    TeamSize { path: String },
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error(transparent)]
    World(#[from] StructureError),
}

impl Certificate {
    pub fn team(&self) -> &Team {
        match self {
            Certificate::Leaf { team }
            | Certificate::And { team, .. }
            | Certificate::SplitOr { team, .. }
            | Certificate::ClassicalOr { team, .. }
            | Certificate::Box { team, .. }
            | Certificate::Diamond { team, .. } => team,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Certificate::Leaf { .. } => "leaf",
            Certificate::And { .. } => "and",
            Certificate::SplitOr { .. } => "split_or",
            Certificate::ClassicalOr { .. } => "classical_or",
            Certificate::Box { .. } => "box",
            Certificate::Diamond { .. } => "diamond",
        }
    }

    pub fn to_json(&self, w: &KripkeStructure) -> String {
        let mut s = serde_json::to_string_pretty(&Node::from_cert(self, w)).expect("serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str, w: &KripkeStructure) -> Result<Certificate, CertificateError> {
        let node: Node =
            serde_json::from_str(text).map_err(|e| CertificateError::Malformed(e.to_string()))?;
        node.into_cert(w)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum Node {
    Leaf {
        team: Vec<String>,
    },
    And {
        team: Vec<String>,
        left: Box<Node>,
        right: Box<Node>,
    },
    SplitOr {
        team: Vec<String>,
        left: Box<Node>,
        right: Box<Node>,
    },
    ClassicalOr {
        team: Vec<String>,
        side: Side,
        child: Box<Node>,
    },
    Box {
        team: Vec<String>,
        child: Box<Node>,
    },
    Diamond {
        team: Vec<String>,
        successor: Vec<String>,
        child: Box<Node>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Side {
    Left,
    Right,
}

fn sorted_names(w: &KripkeStructure, t: &Team) -> Vec<String> {
    let mut names: Vec<String> = t.iter().map(|i| w.world_name(i).to_string()).collect();
    names.sort();
    names
}

impl Node {
    fn from_cert(c: &Certificate, w: &KripkeStructure) -> Node {
        let n = |t: &Team| sorted_names(w, t);
        let b = |c: &Certificate| Box::new(Node::from_cert(c, w));
        match c {
            Certificate::Leaf { team } => Node::Leaf { team: n(team) },
            Certificate::And { team, left, right } => Node::And {
                team: n(team),
                left: b(left),
                right: b(right),
            },
            Certificate::SplitOr { team, left, right } => Node::SplitOr {
                team: n(team),
                left: b(left),
                right: b(right),
            },
            Certificate::ClassicalOr { team, left, child } => Node::ClassicalOr {
                team: n(team),
                side: if *left { Side::Left } else { Side::Right },
                child: b(child),
            },
            Certificate::Box { team, child } => Node::Box {
                team: n(team),
                child: b(child),
            },
            Certificate::Diamond {
                team,
                successor,
                child,
            } => Node::Diamond {
                team: n(team),
                successor: n(successor),
                child: b(child),
            },
        }
    }

    fn into_cert(self, w: &KripkeStructure) -> Result<Certificate, CertificateError> {
        let t = |names: Vec<String>| team_from_names(w, &names);
        let b = |n: Box<Node>| n.into_cert(w).map(Box::new);
        Ok(match self {
            Node::Leaf { team } => Certificate::Leaf { team: t(team)? },
            Node::And { team, left, right } => Certificate::And {
                team: t(team)?,
                left: b(left)?,
                right: b(right)?,
            },
            Node::SplitOr { team, left, right } => Certificate::SplitOr {
                team: t(team)?,
                left: b(left)?,
                right: b(right)?,
            },
            Node::ClassicalOr { team, side, child } => Certificate::ClassicalOr {
                team: t(team)?,
                left: matches!(side, Side::Left),
                child: b(child)?,
            },
            Node::Box { team, child } => Certificate::Box {
                team: t(team)?,
                child: b(child)?,
            },
            Node::Diamond {
                team,
                successor,
                child,
            } => Certificate::Diamond {
                team: t(team)?,
                successor: t(successor)?,
                child: b(child)?,
            },
        })
    }
}

fn shape(
    phi: &Formula,
    c: &Certificate,
    w: &KripkeStructure,
    path: &mut String,
) -> Result<(), CertificateError> {
    let mismatch = |path: &String, expected| CertificateError::ShapeMismatch {
        path: if path.is_empty() {
            "root".into()
        } else {
            path.clone()
        },
        expected,
    };
    if !w.is_valid_team(c.team()) {
        return Err(CertificateError::TeamSize { path: path.clone() });
    }
    let descend = |step: &str, f: &Formula, c: &Certificate, path: &mut String| {
        let len = path.len();
        path.push_str(step);
        let r = shape(f, c, w, path);
        path.truncate(len);
        r
    };
    match (phi, c) {
        (f, Certificate::Leaf { .. }) if f.is_atomic() => Ok(()),
        (Formula::And(l, r), Certificate::And { left, right, .. })
        | (Formula::SplitOr(l, r), Certificate::SplitOr { left, right, .. }) => {
            descend("/left", l, left, path)?;
            descend("/right", r, right, path)
        }
        (Formula::ClassicalOr(l, r), Certificate::ClassicalOr { left, child, .. }) => {
            if *left {
                descend("/left", l, child, path)
            } else {
                descend("/right", r, child, path)
            }
        }
        (Formula::Box(f), Certificate::Box { child, .. }) => descend("/child", f, child, path),
        (
            Formula::Diamond(f),
            Certificate::Diamond {
                successor, child, ..
            },
        ) => {
            if !w.is_valid_team(successor) {
                return Err(CertificateError::TeamSize { path: path.clone() });
            }
            descend("/child", f, child, path)
        }
        (f, c) => {
            let expected = match f {
                f if f.is_atomic() => "leaf",
                Formula::And(..) => "and",
                Formula::SplitOr(..) => "split_or",
                Formula::ClassicalOr(..) => "classical_or",
                Formula::Box(_) => "box",
                _ => "diamond",
            };
            debug_assert_ne!(expected, c.kind());
            Err(mismatch(path, expected))
        }
    }
}

fn replay(w: &KripkeStructure, phi: &Formula, c: &Certificate) -> bool {
    let team = c.team();
    match (phi, c) {
        (f, Certificate::Leaf { .. }) => atom_sat(w, team, f),
        (Formula::And(l, r), Certificate::And { left, right, .. }) => {
            left.team() == team && right.team() == team && replay(w, l, left) && replay(w, r, right)
        }
        (Formula::SplitOr(l, r), Certificate::SplitOr { left, right, .. }) => {
            &left.team().union(right.team()) == team && replay(w, l, left) && replay(w, r, right)
        }
        (Formula::ClassicalOr(l, r), Certificate::ClassicalOr { left, child, .. }) => {
            child.team() == team && replay(w, if *left { l } else { r }, child)
        }
        (Formula::Box(f), Certificate::Box { child, .. }) => {
            child.team() == &w.image(team) && replay(w, f, child)
        }
        (
            Formula::Diamond(f),
            Certificate::Diamond {
                successor, child, ..
            },
        ) => {
            w.successor_covers(team, successor) && child.team() == successor && replay(w, f, child)
        }
        _ => unreachable!("shape checked before replay"),
    }
}

/// Replays the recorded choices. `Ok(false)` is a semantic rejection; a
/// certificate that does not follow the formula's shape is an error.
pub fn verify_certificate(
    w: &KripkeStructure,
    t: &Team,
    phi: &Formula,
    c: &Certificate,
) -> Result<bool, CertificateError> {
    shape(phi, c, w, &mut String::new())?;
    Ok(c.team() == t && replay(w, phi, c))
}
