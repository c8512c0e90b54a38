//! Seeded generator of small programs over lists and trees, and the structural
//! checks every transformation of them must pass.

use std::collections::BTreeSet;

use catachc::cata::split_cata_atom;
use catachc::pipeline::{run, PipelineOptions, Run};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum S {
    Int,
    List,
    Tree,
}

impl S {
    fn decl(self) -> &'static str {
        match self {
            S::Int => "int",
            S::List => "list(int)",
            S::Tree => "tree(int)",
        }
    }
}

struct Cata {
    name: &'static str,
    sort: S,
    input: bool,
    decl: &'static str,
    rules: &'static str,
}

const POOL: [Cata; 5] = [
    Cata {
        name: "listcount",
        sort: S::List,
        input: true,
        decl: "listcount(in:int, adt:list(int), out:int)",
        rules: "listcount(X,[],N) :- N=0.\nlistcount(X,[H|T],N) :- N=ite(X=H,NT+1,NT), listcount(X,T,NT).\n",
    },
    Cata {
        name: "size",
        sort: S::List,
        input: false,
        decl: "size(adt:list(int), out:int)",
        rules: "size([],N) :- N=0.\nsize([H|T],N) :- N=S+1, size(T,S).\n",
    },
    Cata {
        name: "sum",
        sort: S::List,
        input: false,
        decl: "sum(adt:list(int), out:int)",
        rules: "sum([],N) :- N=0.\nsum([H|T],N) :- N=H+S, sum(T,S).\n",
    },
    Cata {
        name: "treecount",
        sort: S::Tree,
        input: true,
        decl: "treecount(in:int, adt:tree(int), out:int)",
        rules:
            "treecount(X,leaf,N) :- N=0.\ntreecount(X,node(L,V,R),N) :- N=K+NL+NR, K=ite(X=V,1,0), treecount(X,L,NL), treecount(X,R,NR).\n",
    },
    Cata {
        name: "tsize",
        sort: S::Tree,
        input: false,
        decl: "tsize(adt:tree(int), out:int)",
        rules: "tsize(leaf,N) :- N=0.\ntsize(node(L,V,R),N) :- N=NL+NR+1, tsize(L,NL), tsize(R,NR).\n",
    },
];

struct Gen {
    rng: StdRng,
    fresh: usize,
}

impl Gen {
    fn var(&mut self, p: &str) -> String {
        self.fresh += 1;
        format!("{p}{}", self.fresh)
    }

    /// A head argument of sort `s`; the variables it introduces go to `avail`.
    fn head_arg(&mut self, s: S, base: bool, avail: &mut Vec<(S, String)>) -> String {
        match (s, base, self.rng.gen_bool(0.7)) {
            (S::Int, true, true) => "0".into(),
            (S::List, true, true) => "[]".into(),
            (S::Tree, true, true) => "leaf".into(),
            (S::List, false, true) => {
                let (h, t) = (self.var("H"), self.var("T"));
                avail.push((S::Int, h.clone()));
                avail.push((S::List, t.clone()));
                format!("[{h}|{t}]")
            }
            (S::Tree, false, true) => {
                let (l, x, r) = (self.var("L"), self.var("X"), self.var("R"));
                avail.push((S::Tree, l.clone()));
                avail.push((S::Int, x.clone()));
                avail.push((S::Tree, r.clone()));
                format!("node({l},{x},{r})")
            }
            _ => {
                let v = self.var("V");
                avail.push((s, v.clone()));
                v
            }
        }
    }

    /// A body argument of sort `s`: mostly a variable already in scope.
    fn body_arg(&mut self, s: S, avail: &mut Vec<(S, String)>) -> String {
        let pool: Vec<String> = avail.iter().filter(|(t, _)| *t == s).map(|(_, v)| v.clone()).collect();
        if !pool.is_empty() && self.rng.gen_bool(0.75) {
            return pool.choose(&mut self.rng).unwrap().clone();
        }
        let v = self.var("W");
        avail.push((s, v.clone()));
        v
    }
}

/// One random program with its query.
pub fn program(seed: u64) -> String {
    let mut g = Gen { rng: StdRng::seed_from_u64(seed), fresh: 0 };
    let npreds = g.rng.gen_range(1..=4);
    let mut preds: Vec<Vec<S>> = Vec::new();
    for _ in 0..npreds {
        let arity = g.rng.gen_range(1..=3);
        let mut sorts: Vec<S> = (0..arity).map(|_| *[S::Int, S::List, S::List, S::Tree].choose(&mut g.rng).unwrap()).collect();
        if sorts.iter().all(|s| *s == S::Int) {
            sorts[0] = if g.rng.gen_bool(0.5) { S::List } else { S::Tree };
        }
        preds.push(sorts);
    }
    let uses = |s: S| preds.iter().flatten().any(|t| *t == s);
    let (uses_list, uses_tree) = (uses(S::List), uses(S::Tree));

    // At most two catamorphisms in total, at least one per ADT sort used.
    let list_pool: Vec<&Cata> = POOL.iter().filter(|c| c.sort == S::List).collect();
    let tree_pool: Vec<&Cata> = POOL.iter().filter(|c| c.sort == S::Tree).collect();
    let mut chosen: Vec<&Cata> = Vec::new();
    if uses_list {
        let k = if uses_tree { 1 } else { g.rng.gen_range(1..=2) };
        chosen.extend(list_pool.choose_multiple(&mut g.rng, k));
    }
    if uses_tree {
        let k = if uses_list { 1 } else { g.rng.gen_range(1..=2) };
        chosen.extend(tree_pool.choose_multiple(&mut g.rng, k.min(tree_pool.len())));
    }

    let mut out = String::new();
    if uses_tree {
        out.push_str(":- data tree(A) ==> leaf ; node(tree(A),A,tree(A)).\n");
    }
    for c in &chosen {
        out.push_str(&format!(":- cata {}.\n", c.decl));
    }
    for s in [S::List, S::Tree] {
        let atoms: Vec<String> = chosen
            .iter()
            .filter(|c| c.sort == s)
            .enumerate()
            .map(|(i, c)| if c.input { format!("{}(X, A, N{i})", c.name) } else { format!("{}(A, N{i})", c.name) })
            .collect();
        if !atoms.is_empty() {
            out.push_str(&format!(":- cata_abs {} ==> {}.\n", s.decl(), atoms.join(", ")));
        }
    }
    for (i, sorts) in preds.iter().enumerate() {
        let ss: Vec<&str> = sorts.iter().map(|s| s.decl()).collect();
        out.push_str(&format!(":- pred p{i}({}).\n", ss.join(", ")));
    }
    out.push('\n');

    for (i, sorts) in preds.iter().enumerate() {
        let mut avail = Vec::new();
        let args: Vec<String> = sorts.iter().map(|s| g.head_arg(*s, true, &mut avail)).collect();
        out.push_str(&format!("p{i}({}).\n", args.join(",")));
        for _ in 0..g.rng.gen_range(1..=2) {
            let mut avail = Vec::new();
            let args: Vec<String> = sorts.iter().map(|s| g.head_arg(*s, false, &mut avail)).collect();
            let mut body = Vec::new();
            for _ in 0..g.rng.gen_range(1..=2) {
                let q = g.rng.gen_range(0..preds.len());
                let qa: Vec<String> = preds[q].clone().into_iter().map(|s| g.body_arg(s, &mut avail)).collect();
                body.push(format!("p{q}({})", qa.join(",")));
            }
            let ints: Vec<String> = avail.iter().filter(|(s, _)| *s == S::Int).map(|(_, v)| v.clone()).collect();
            if ints.len() >= 2 && g.rng.gen_bool(0.5) {
                let a = ints.choose(&mut g.rng).unwrap();
                let b = ints.choose(&mut g.rng).unwrap();
                let c = match g.rng.gen_range(0..4) {
                    0 => format!("{a}={b}+1"),
                    1 => format!("{a}<{b}"),
                    2 => format!("{a}>={b}+1"),
                    _ => format!("~({a}={b})"),
                };
                body.insert(0, c);
            }
            out.push_str(&format!("p{i}({}) :- {}.\n", args.join(","), body.join(", ")));
        }
    }
    for c in &chosen {
        out.push_str(c.rules);
    }

    // Query over p0 with one catamorphism atom per ADT argument and a shared input.
    let zs: Vec<String> = (0..preds[0].len()).map(|k| format!("Z{k}")).collect();
    let mut body = Vec::new();
    let mut outs = Vec::new();
    for (k, s) in preds[0].iter().enumerate() {
        let Some(c) = chosen.iter().filter(|c| c.sort == *s).collect::<Vec<_>>().choose(&mut g.rng).copied() else { continue };
        let n = format!("M{k}");
        body.push(if c.input { format!("{}(Y,Z{k},{n})", c.name) } else { format!("{}(Z{k},{n})", c.name) });
        outs.push(n);
    }
    let k = g.rng.gen_range(0..4);
    let constraint = match (outs.as_slice(), k) {
        ([a, b, ..], 0) => format!("{a}>{b}"),
        ([a, b, ..], 1) => format!("~({a}={b})"),
        ([a, ..], 2) => format!("{a}<0"),
        ([a, ..], _) => format!("{a}>2"),
        ([], _) => "0=1".into(),
    };
    out.push_str(&format!("false :- {constraint}, {}p0({}).\n", body.iter().map(|b| format!("{b}, ")).collect::<String>(), zs.join(",")));
    out
}

/// Transforms the program of `seed` and checks that no catamorphism is left,
/// that the definitions satisfy their invariants, and that each definition
/// carries exactly the atoms its predicate's spec requests.
pub fn transform_checked(seed: u64) -> Result<Run, String> {
    let text = program(seed);
    let r = run(&text, &PipelineOptions::default()).map_err(|e| format!("seed {seed}: {e}\n{text}"))?;
    let out = &r.output;
    let catas = &out.program.catas;
    for c in out.t_w.iter().chain(&out.t_wo).chain(&out.t_wwo) {
        if c.body.iter().any(|a| catas.contains_key(&a.pred)) {
            return Err(format!("seed {seed}: catamorphism left in {c}\n{text}"));
        }
    }
    out.defs.check_invariants(catas).map_err(|e| format!("seed {seed}: {e}\n{text}"))?;
    for d in out.defs.iter() {
        let Some(spec) = r.prepared.specs.get(d.program_pred()) else { continue };
        let wanted: BTreeSet<(String, usize)> = spec
            .atoms
            .iter()
            .map(|a| {
                let (_, t, _) = split_cata_atom(a, &catas[&a.pred]);
                (a.pred.clone(), spec.head.iter().position(|z| Some(z) == t.as_var()).unwrap())
            })
            .collect();
        if d.keys(catas) != wanted {
            return Err(format!("seed {seed}: keys of {} differ from the spec\n{text}", d.clause()));
        }
    }
    Ok(r)
}
