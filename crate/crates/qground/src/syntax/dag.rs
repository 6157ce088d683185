use std::fmt::Write as _;

use super::{Const, Func, Term};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum DagNode {
    Const(Const),
    Op(Func, Vec<usize>),
}

/// A ground term whose nodes may be shared. Every argument reference
/// points to a strictly earlier node.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct DagTerm {
    nodes: Vec<DagNode>,
    root: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DagError {
    #[error("empty DAG")]
    Empty,
    #[error("node {node}: argument {arg} does not refer to an earlier node")]
    ForwardRef { node: usize, arg: usize },
    #[error("node {node}: {name} expects {expected} argument(s), got {got}")]
    Arity {
        node: usize,
        name: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("root {0} is out of range")]
    BadRoot(usize),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

impl DagTerm {
    pub fn new(nodes: Vec<DagNode>, root: usize) -> Result<DagTerm, DagError> {
        if nodes.is_empty() {
            return Err(DagError::Empty);
        }
        for (i, n) in nodes.iter().enumerate() {
            if let DagNode::Op(f, args) = n {
                if args.len() != f.arity() {
                    return Err(DagError::Arity {
                        node: i,
                        name: f.name(),
                        expected: f.arity(),
                        got: args.len(),
                    });
                }
                if let Some(&a) = args.iter().find(|&&a| a >= i) {
                    return Err(DagError::ForwardRef { node: i, arg: a });
                }
            }
        }
        if root >= nodes.len() {
            return Err(DagError::BadRoot(root));
        }
        Ok(DagTerm { nodes, root })
    }

    pub fn nodes(&self) -> &[DagNode] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// The tree term with every shared node copied out.
    pub fn unfold(&self) -> Term {
        let mut trees: Vec<Term> = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let t = match n {
                DagNode::Const(c) => Term::Const(*c),
                DagNode::Op(f, args) => Term::App(*f, args.iter().map(|&a| trees[a].clone()).collect()),
            };
            trees.push(t);
        }
        trees.swap_remove(self.root)
    }

    /// Symbol count of the unfolded tree, computed without unfolding.
    pub fn unfolded_size(&self) -> u128 {
        let mut sizes: Vec<u128> = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let s = match n {
                DagNode::Const(_) => 1,
                DagNode::Op(_, args) => 1 + args.iter().map(|&a| sizes[a]).sum::<u128>(),
            };
            sizes.push(s);
        }
        sizes[self.root]
    }

    /// Line-oriented records `idx: op arg...` followed by `root: idx`.
    pub fn to_records(&self, sep: &str) -> String {
        let mut out = String::new();
        for (i, n) in self.nodes.iter().enumerate() {
            match n {
                DagNode::Const(c) => write!(out, "{i}: {}", c.name()).unwrap(),
                DagNode::Op(f, args) => {
                    write!(out, "{i}: {}", f.name()).unwrap();
                    for a in args {
                        write!(out, " {a}").unwrap();
                    }
                }
            }
            out.push_str(sep);
        }
        write!(out, "root: {}", self.root).unwrap();
        out
    }

    /// Parse records separated by newlines or `;`.
    pub fn parse_records(text: &str) -> Result<DagTerm, DagError> {
        let mut nodes = Vec::new();
        let mut root = None;
        for (line_no, raw) in text.split(['\n', ';']).enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| DagError::Syntax { line: line_no + 1, msg };
            let (head, rest) = line
                .split_once(':')
                .ok_or_else(|| err(format!("expected `idx: op args`, got `{line}`")))?;
            let head = head.trim();
            let mut words = rest.split_whitespace();
            if head == "root" {
                let idx = words.next().ok_or_else(|| err("missing root index".into()))?;
                root = Some(idx.parse::<usize>().map_err(|e| err(e.to_string()))?);
                continue;
            }
            let idx: usize = head.parse().map_err(|_| err(format!("bad node index `{head}`")))?;
            if idx != nodes.len() {
                return Err(err(format!("expected node {}, found {idx}", nodes.len())));
            }
            let op = words.next().ok_or_else(|| err("missing operator".into()))?;
            let node = match op {
                "C0" => DagNode::Const(Const::C0),
                "C1" => DagNode::Const(Const::C1),
                "C2" => DagNode::Const(Const::C2),
                _ => {
                    let f = Func::from_name(op).ok_or_else(|| err(format!("unknown operator `{op}`")))?;
                    let args = words
                        .by_ref()
                        .map(|w| w.parse::<usize>().map_err(|_| err(format!("bad argument `{w}`"))))
                        .collect::<Result<Vec<_>, _>>()?;
                    DagNode::Op(f, args)
                }
            };
            if words.next().is_some() {
                return Err(err("trailing input".into()));
            }
            nodes.push(node);
        }
        let root = root.ok_or(DagError::Syntax {
            line: 0,
            msg: "missing `root:` line".into(),
        })?;
        DagTerm::new(nodes, root)
    }
}
