#![allow(dead_code)]

use std::path::PathBuf;

use polysing::surface::{parse_program, Program};
use polysing::types::{dual, Type};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(name: &str) -> Program {
    let path = fixture_dir().join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_program(&text).unwrap_or_else(|e| panic!("{name}: {e:?}"))
}

pub fn fixture_names() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(fixture_dir())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".psg"))
        .collect();
    names.sort();
    names
}

pub fn parse_type(text: &str) -> Type {
    parse_program("base nat\nbase string").unwrap().parse_type(text).unwrap_or_else(|e| panic!("{text}: {e:?}"))
}

/// Every closed named type of every fixture, plus the duals of the endpoint
/// types among them and a few literal types.
pub fn corpus() -> Vec<(String, Type)> {
    let mut out = Vec::new();
    for f in fixture_names() {
        for (name, t) in fixture(&f).closed_types() {
            if let Ok(d) = dual(&t) {
                out.push((format!("{f}:dual({name})"), d));
            }
            out.push((format!("{f}:{name}"), t));
        }
    }
    for text in [
        "end",
        "Top",
        "&{ m(end). end }",
        "&{ m(&{ m(end). end }). end }",
        "rec a. &{ m(a). end }",
        "&{ m(Top). end }",
        "&{ m<a <: &{ m(end). end }>(a). end }",
        "+{ arg<a>(a). end }",
        "&{ m<a <: Top>(a). &{ m(a). end } }",
    ] {
        out.push((text.to_string(), parse_type(text)));
    }
    out
}

/// Endpoint types of the corpus, i.e. those with a dual.
pub fn endpoint_corpus() -> Vec<(String, Type)> {
    corpus().into_iter().filter(|(_, t)| dual(t).is_ok()).collect()
}

/// Random endpoint type text built from a seed. Recursion variables occur
/// only as continuations and quantified variables only as payloads, so the
/// results are well formed.
pub fn random_type_text(seed: u64, depth: u32) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Gen { rng: &mut rng, recs: Vec::new(), quants: Vec::new(), fresh: 0 };
    g.endpoint(depth)
}

struct Gen<'a> {
    rng: &'a mut ChaCha8Rng,
    recs: Vec<String>,
    quants: Vec<String>,
    fresh: u32,
}

impl Gen<'_> {
    fn name(&mut self, base: &str) -> String {
        self.fresh += 1;
        format!("{base}{}", self.fresh)
    }

    fn endpoint(&mut self, depth: u32) -> String {
        if depth == 0 {
            return match (self.recs.choose(self.rng), self.rng.gen_bool(0.5)) {
                (Some(r), true) => r.clone(),
                _ => "end".into(),
            };
        }
        match self.rng.gen_range(0..6) {
            0 => "end".into(),
            1 => {
                let r = self.name("r");
                self.recs.push(r.clone());
                let body = self.choice(depth);
                self.recs.pop();
                format!("rec {r}. {body}")
            }
            _ => self.choice(depth),
        }
    }

    fn choice(&mut self, depth: u32) -> String {
        let pol = if self.rng.gen_bool(0.5) { "+{" } else { "&{" };
        let mut tags = vec!["m", "n", "e", "f"];
        tags.shuffle(self.rng);
        let k = self.rng.gen_range(1..=3);
        let branches: Vec<String> = tags[..k].iter().map(|t| self.branch(t, depth - 1)).collect();
        format!("{pol} {} }}", branches.join(", "))
    }

    fn branch(&mut self, tag: &str, depth: u32) -> String {
        let nullary = tag == "e" || tag == "f";
        let mut head = tag.to_string();
        let mut bound_var = None;
        if !nullary && self.rng.gen_bool(0.3) {
            let q = self.name("q");
            let bound = match self.rng.gen_range(0..3) {
                0 => String::new(),
                1 => " <: end".into(),
                _ => format!(" <: {}", self.closed(depth.min(1))),
            };
            head = format!("{tag}<{q}{bound}>");
            bound_var = Some(q);
        }
        if let Some(q) = &bound_var {
            self.quants.push(q.clone());
        }
        let payload = if nullary {
            String::new()
        } else {
            let p = match (self.quants.choose(self.rng).cloned(), self.rng.gen_range(0..4)) {
                (Some(q), 0 | 1) => q,
                (_, 2) => "Top".into(),
                _ => self.closed(depth),
            };
            format!("({p})")
        };
        let cont = self.endpoint(depth);
        if bound_var.is_some() {
            self.quants.pop();
        }
        format!("{head}{payload}. {cont}")
    }

    /// A type with no free recursion variables, for payloads and bounds.
    fn closed(&mut self, depth: u32) -> String {
        let recs = std::mem::take(&mut self.recs);
        let quants = self.quants.clone();
        let t = self.endpoint(depth);
        self.recs = recs;
        self.quants = quants;
        t
    }
}

pub fn random_type(seed: u64, depth: u32) -> Option<(String, Type)> {
    let text = random_type_text(seed, depth);
    let prog = parse_program("").unwrap();
    let t = prog.parse_type(&text).ok()?;
    polysing::types::well_formed(&t, &Default::default(), &Default::default()).ok()?;
    Some((text, t))
}
