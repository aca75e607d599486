use crate::syntax::{Process, ProcessKind};
use crate::types::{Branch, Polarity, Type};

pub fn print_type(t: &Type) -> String {
    let mut out = String::new();
    TypePrinter { names: Vec::new() }.ty(t, &mut out);
    out
}

struct TypePrinter {
    // binder names in scope, innermost last
    names: Vec<String>,
}

impl TypePrinter {
    fn pick(&self, hint: &str) -> String {
        let base = if hint.is_empty() || hint == "_" || !hint.starts_with(|c: char| c.is_ascii_alphabetic()) {
            "a"
        } else {
            hint
        };
        let mut name = base.to_string();
        let mut k = 1;
        while self.names.contains(&name) {
            name = format!("{base}{k}");
            k += 1;
        }
        name
    }

    fn ty(&mut self, t: &Type, out: &mut String) {
        match t {
            Type::Top => out.push_str("Top"),
            Type::End => out.push_str("end"),
            Type::Base(b) => out.push_str(b),
            Type::Free(v) => out.push_str(v.hint()),
            Type::Bound(i) => match self.names.len().checked_sub(i + 1) {
                Some(p) => out.push_str(&self.names[p]),
                None => out.push_str(&format!("#{i}")),
            },
            Type::Rec(h, body) => {
                let n = self.pick(h.as_str());
                out.push_str("rec ");
                out.push_str(&n);
                out.push_str(". ");
                self.names.push(n);
                self.ty(body, out);
                self.names.pop();
            }
            Type::Choice(pol, branches) => {
                out.push_str(match pol {
                    Polarity::Internal => "+{ ",
                    Polarity::External => "&{ ",
                });
                for (i, b) in branches.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    self.branch(b, out);
                }
                out.push_str(" }");
            }
        }
    }

    fn branch(&mut self, b: &Branch, out: &mut String) {
        out.push_str(b.tag.as_str());
        let shown = b.binder_used() || b.bound != Type::Top;
        let name = if shown { self.pick(b.var.as_str()) } else { "_".to_string() };
        if shown {
            out.push('<');
            out.push_str(&name);
            if b.bound != Type::Top {
                out.push_str(" <: ");
                self.ty(&b.bound, out);
            }
            out.push('>');
        }
        self.names.push(name);
        if let Some(p) = &b.payload {
            out.push('(');
            self.ty(p, out);
            out.push(')');
        }
        out.push_str(". ");
        self.ty(&b.cont, out);
        self.names.pop();
    }
}

pub fn print_process(p: &Process) -> String {
    let mut out = String::new();
    proc_at(p, 0, &mut out);
    out
}

// precedence: 0 `||`, 1 `(+)`, 2 `+`, 3 prefix
fn level(p: &Process) -> u8 {
    match &p.kind {
        ProcessKind::Parallel(..) => 0,
        ProcessKind::Choice(..) => 1,
        ProcessKind::Receive { branches, .. } if branches.len() > 1 => 2,
        _ => 3,
    }
}

fn proc_at(p: &Process, min: u8, out: &mut String) {
    if level(p) < min {
        out.push('(');
        proc_at(p, 0, out);
        out.push(')');
        return;
    }
    match &p.kind {
        ProcessKind::Idle => out.push('0'),
        ProcessKind::Var(x) => out.push_str(&x.to_string()),
        ProcessKind::Close(u) => out.push_str(&format!("close({u})")),
        ProcessKind::Open { left, right, annotation, body } => {
            match annotation {
                Some(t) => out.push_str(&format!("open({left} : {}, {right}). ", print_type(t))),
                None => out.push_str(&format!("open({left}, {right}). ")),
            }
            proc_at(body, 3, out);
        }
        ProcessKind::Send { subject, tag, instantiation, argument, body } => {
            out.push_str(&format!("{subject}!{tag}"));
            if let Some(t) = instantiation {
                out.push_str(&format!("<{}>", print_type(t)));
            }
            match argument {
                Some(v) => out.push_str(&format!("({v}). ")),
                None => out.push_str("(). "),
            }
            proc_at(body, 3, out);
        }
        ProcessKind::Receive { subject, branches } => {
            for (i, b) in branches.iter().enumerate() {
                if i > 0 {
                    out.push_str(" + ");
                }
                match &b.binder {
                    Some(x) => out.push_str(&format!("{subject}?{}({x}). ", b.tag)),
                    None => out.push_str(&format!("{subject}?{}(). ", b.tag)),
                }
                proc_at(&b.body, 3, out);
            }
        }
        ProcessKind::Choice(l, r) => {
            proc_at(l, 1, out);
            out.push_str(" (+) ");
            proc_at(r, 2, out);
        }
        ProcessKind::Parallel(l, r) => {
            proc_at(l, 0, out);
            out.push_str(" || ");
            proc_at(r, 1, out);
        }
        ProcessKind::Rec { var, body } => {
            out.push_str(&format!("rec {var}. "));
            proc_at(body, 3, out);
        }
    }
}
