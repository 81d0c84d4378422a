use certkernel_core::{Clause, Lit, Node, Sort, TermId, TermStore};
use proptest::prelude::*;

/// Random Boolean/Int term tree, built outside the store.
#[derive(Debug, Clone)]
enum Tree {
    BoolVar(u8),
    IntVar(u8),
    Int(i8),
    Not(Box<Tree>),
    And(Vec<Tree>),
    Or(Vec<Tree>),
    Xor(Box<Tree>, Box<Tree>),
    Le(Box<Tree>, Box<Tree>),
    Add(Box<Tree>, Box<Tree>),
}

fn int_tree() -> impl Strategy<Value = Tree> {
    let leaf = prop_oneof![
        (0u8..3).prop_map(Tree::IntVar),
        (-3i8..4).prop_map(Tree::Int)
    ];
    leaf.prop_recursive(3, 8, 2, |inner| {
        (inner.clone(), inner).prop_map(|(a, b)| Tree::Add(Box::new(a), Box::new(b)))
    })
}

fn bool_tree() -> impl Strategy<Value = Tree> {
    let leaf = prop_oneof![
        (0u8..4).prop_map(Tree::BoolVar),
        (int_tree(), int_tree()).prop_map(|(a, b)| Tree::Le(Box::new(a), Box::new(b))),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Tree::Not(Box::new(a))),
            prop::collection::vec(inner.clone(), 1..4).prop_map(Tree::And),
            prop::collection::vec(inner.clone(), 1..4).prop_map(Tree::Or),
            (inner.clone(), inner).prop_map(|(a, b)| Tree::Xor(Box::new(a), Box::new(b))),
        ]
    })
}

fn build(s: &mut TermStore, t: &Tree) -> TermId {
    match t {
        Tree::BoolVar(i) => s.var(&format!("p{i}"), Sort::Bool).unwrap(),
        Tree::IntVar(i) => s.var(&format!("x{i}"), Sort::Int).unwrap(),
        Tree::Int(v) => s.int(*v),
        Tree::Not(a) => {
            let a = build(s, a);
            s.not(a).unwrap()
        }
        Tree::And(args) => {
            let args = args.iter().map(|a| build(s, a)).collect();
            s.and(args).unwrap()
        }
        Tree::Or(args) => {
            let args = args.iter().map(|a| build(s, a)).collect();
            s.or(args).unwrap()
        }
        Tree::Xor(a, b) => {
            let (a, b) = (build(s, a), build(s, b));
            s.xor(a, b).unwrap()
        }
        Tree::Le(a, b) => {
            let (a, b) = (build(s, a), build(s, b));
            s.intern(Node::Le([a, b])).unwrap()
        }
        Tree::Add(a, b) => {
            let (a, b) = (build(s, a), build(s, b));
            s.intern(Node::Add(vec![a, b])).unwrap()
        }
    }
}

/// Re-interns a stored term from its node, recursively.
fn rebuild(s: &mut TermStore, t: TermId) -> TermId {
    let node = s.node(t).clone();
    let mapped = match node {
        Node::Not(a) => Node::Not(rebuild(s, a)),
        Node::And(args) => Node::And(args.iter().map(|&a| rebuild(s, a)).collect()),
        Node::Or(args) => Node::Or(args.iter().map(|&a| rebuild(s, a)).collect()),
        Node::Add(args) => Node::Add(args.iter().map(|&a| rebuild(s, a)).collect()),
        Node::Xor([a, b]) => Node::Xor([rebuild(s, a), rebuild(s, b)]),
        Node::Le([a, b]) => Node::Le([rebuild(s, a), rebuild(s, b)]),
        leaf => leaf,
    };
    s.intern(mapped).unwrap()
}

fn structure(s: &TermStore, t: TermId) -> String {
    let node = s.node(t);
    let head = match node {
        Node::Var(name, _) => return name.to_string(),
        Node::IntConst(v) => return v.to_string(),
        other => other.kind_name(),
    };
    let args: Vec<String> = node.children().iter().map(|&c| structure(s, c)).collect();
    format!("({head} {})", args.join(" "))
}

proptest! {
    #[test]
    fn rebuild_is_identity(tree in bool_tree()) {
        let mut s = TermStore::new();
        let t = build(&mut s, &tree);
        let before = s.len();
        prop_assert_eq!(rebuild(&mut s, t), t);
        prop_assert_eq!(s.len(), before);
    }

    #[test]
    fn equal_ids_iff_equal_structure(trees in prop::collection::vec(bool_tree(), 2..6)) {
        let mut s = TermStore::new();
        let ids: Vec<TermId> = trees.iter().map(|t| build(&mut s, t)).collect();
        for &a in &ids {
            for &b in &ids {
                prop_assert_eq!(a == b, structure(&s, a) == structure(&s, b));
            }
        }
    }

    #[test]
    fn children_precede_parents(tree in bool_tree()) {
        let mut s = TermStore::new();
        build(&mut s, &tree);
        for (id, node) in s.iter() {
            prop_assert!(node.children().iter().all(|&c| c < id));
        }
    }

    #[test]
    fn mk_clause_is_idempotent(codes in prop::collection::vec((0usize..6, any::<bool>()), 0..10)) {
        let mut s = TermStore::new();
        let atoms: Vec<TermId> = (0..6).map(|i| s.var(&format!("p{i}"), Sort::Bool).unwrap()).collect();
        let lits: Vec<Lit> = codes.iter().map(|&(i, p)| Lit::new(atoms[i], p)).collect();
        let once: Clause = s.mk_clause(lits).unwrap();
        let twice = s.mk_clause(once.lits().iter().copied()).unwrap();
        prop_assert_eq!(&once, &twice);
        prop_assert!(once.lits().windows(2).all(|w| w[0] < w[1]));
    }
}
