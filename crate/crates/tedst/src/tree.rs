//! Ordered labeled trees with 1-based postorder indexing.
//!
//! Every algorithm in this crate operates on [`OrderedTree`]: a rooted tree
//! whose sibling order is significant, with nodes numbered 1..n by a
//! postorder traversal (children before parents, the root last). The
//! structure also carries, per node, the postorder index of its leftmost
//! leaf descendant, which is what makes subtree-span checks and the
//! keyroot decomposition constant-time.

use thiserror::Error;

/// Label attached to a tree node.
///
/// `key` is the comparison form used by matching and lexicon lookups
/// (the lemma when one is available, otherwise the surface form);
/// `surface` is what gets rendered and what stop-word lookups use.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NodeLabel {
    pub surface: String,
    pub key: String,
    /// Part-of-speech tag, when known.
    pub tag: Option<String>,
    /// Dependency relation to the parent, when known.
    pub rel: Option<String>,
}

impl NodeLabel {
    /// Label whose key equals its surface form.
    pub fn new(surface: impl Into<String>) -> Self {
        let surface = surface.into();
        NodeLabel {
            key: surface.clone(),
            surface,
            tag: None,
            rel: None,
        }
    }

    /// Label with an explicit comparison key (typically a lemma).
    pub fn with_key(surface: impl Into<String>, key: impl Into<String>) -> Self {
        NodeLabel {
            surface: surface.into(),
            key: key.into(),
            tag: None,
            rel: None,
        }
    }

    /// Case-folded comparison key.
    pub fn folded_key(&self) -> String {
        self.key.to_lowercase()
    }
}

/// Errors reported while assembling a tree from parent references.
///
/// Indices in these variants refer to the 0-based surface position of the
/// offending node in the input arrays.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("tree has no root (every node has a parent)")]
    NoRoot,
    #[error("multiple roots: nodes {0} and {1} both lack a parent")]
    MultipleRoots(usize, usize),
    #[error("node {index} references out-of-range parent {parent}")]
    DanglingParent { index: usize, parent: usize },
    #[error("cycle detected involving node {index}")]
    Cycle { index: usize },
    #[error("node {index} has an empty label")]
    EmptyLabel { index: usize },
    #[error("label and parent arrays differ in length ({labels} vs {parents})")]
    LengthMismatch { labels: usize, parents: usize },
    #[error("cannot build an empty tree")]
    Empty,
}

/// Rooted ordered labeled tree, postorder-indexed 1..n.
///
/// Immutable after construction; shares freely across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedTree {
    labels: Vec<NodeLabel>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    lld: Vec<usize>,
}

/// Keyroots of a tree: the root plus every node with a left sibling;
/// equivalently, for each distinct leftmost-leaf value, the highest
/// postorder index carrying it. Sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyrootSet {
    indices: Vec<usize>,
}

impl KeyrootSet {
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

impl OrderedTree {
    /// Build a tree from nodes given in surface (left-to-right) order.
    ///
    /// `parents[i]` is the surface index of node i's parent, or `None` for
    /// the root. Children keep their surface order, which may place them on
    /// both sides of the head; the nodes are then renumbered in postorder.
    pub fn build(
        parents: &[Option<usize>],
        labels: Vec<NodeLabel>,
    ) -> Result<OrderedTree, TreeError> {
        let n = parents.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        if labels.len() != n {
            return Err(TreeError::LengthMismatch {
                labels: labels.len(),
                parents: n,
            });
        }
        for (i, label) in labels.iter().enumerate() {
            if label.surface.is_empty() || label.key.is_empty() {
                return Err(TreeError::EmptyLabel { index: i });
            }
        }

        let mut root = None;
        for (i, p) in parents.iter().enumerate() {
            match *p {
                None => match root {
                    None => root = Some(i),
                    Some(r) => return Err(TreeError::MultipleRoots(r, i)),
                },
                Some(p) if p >= n => {
                    return Err(TreeError::DanglingParent {
                        index: i,
                        parent: p,
                    })
                }
                Some(_) => {}
            }
        }
        let root = root.ok_or(TreeError::NoRoot)?;

        // Children in surface order.
        let mut kids: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, p) in parents.iter().enumerate() {
            if let Some(p) = *p {
                kids[p].push(i);
            }
        }

        // Iterative postorder from the root; anything left unvisited sits
        // on a cycle.
        let mut post_of = vec![0usize; n]; // surface -> 1-based postorder
        let mut order = Vec::with_capacity(n); // postorder -> surface
        let mut stack = vec![(root, 0usize)];
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if *next < kids[node].len() {
                let child = kids[node][*next];
                *next += 1;
                stack.push((child, 0));
            } else {
                stack.pop();
                order.push(node);
                post_of[node] = order.len();
            }
        }
        if order.len() != n {
            let index = (0..n).find(|&i| post_of[i] == 0).unwrap();
            return Err(TreeError::Cycle { index });
        }

        let mut slots: Vec<Option<NodeLabel>> = labels.into_iter().map(Some).collect();
        let mut tree = OrderedTree {
            labels: Vec::with_capacity(n),
            parent: vec![None; n],
            children: vec![Vec::new(); n],
            lld: vec![0; n],
        };
        for (post0, &surf) in order.iter().enumerate() {
            tree.labels.push(slots[surf].take().unwrap());
            tree.parent[post0] = parents[surf].map(|p| post_of[p]);
            tree.children[post0] = kids[surf].iter().map(|&c| post_of[c]).collect();
        }
        for i in 1..=n {
            tree.lld[i - 1] = match tree.children[i - 1].first() {
                None => i,
                Some(&first) => tree.lld[first - 1],
            };
        }
        Ok(tree)
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        // Construction rejects empty trees.
        false
    }

    /// Postorder index of the root (always `len()`).
    pub fn root(&self) -> usize {
        self.len()
    }

    pub fn label(&self, i: usize) -> &NodeLabel {
        &self.labels[i - 1]
    }

    /// All labels in postorder.
    pub fn labels(&self) -> &[NodeLabel] {
        &self.labels
    }

    /// Labels of the contiguous postorder range `first..=last`.
    pub fn label_span(&self, first: usize, last: usize) -> &[NodeLabel] {
        &self.labels[first - 1..last]
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        self.parent[i - 1]
    }

    /// Children of node `i` in left-to-right order.
    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i - 1]
    }

    pub fn is_leaf(&self, i: usize) -> bool {
        self.children[i - 1].is_empty()
    }

    /// Postorder index of the leftmost leaf under node `i`.
    pub fn lld(&self, i: usize) -> usize {
        self.lld[i - 1]
    }

    /// Leftmost-leaf-descendant indices for nodes 1..n, in postorder.
    pub fn leftmost_leaf_descendants(&self) -> &[usize] {
        &self.lld
    }

    /// The keyroots: `{k : no k' > k has lld(k') = lld(k)}`, ascending.
    pub fn keyroots(&self) -> KeyrootSet {
        let n = self.len();
        let mut seen = vec![false; n + 1];
        let mut indices = Vec::new();
        for i in (1..=n).rev() {
            let l = self.lld(i);
            if !seen[l] {
                seen[l] = true;
                indices.push(i);
            }
        }
        indices.reverse();
        KeyrootSet { indices }
    }

    /// True iff the postorder range `[first, last]` is exactly the subtree
    /// rooted at `last`: `first` is a leaf and `lld(last) == first`.
    pub fn is_subtree_span(&self, first: usize, last: usize) -> bool {
        assert!(
            first >= 1 && first <= last && last <= self.len(),
            "span out of range: [{first}, {last}] in tree of {} nodes",
            self.len()
        );
        self.is_leaf(first) && self.lld(last) == first
    }
}
