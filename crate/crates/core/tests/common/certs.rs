use invarforms::feasibility::{Certificate, Factor, Node};

pub fn visit(n: &mut Node, f: &mut dyn FnMut(&mut String)) {
    match n {
        Node::Combine { terms, result, next } => {
            terms.iter_mut().for_each(|t| f(&mut t.coef));
            f(result);
            visit(next, f);
        }
        Node::Cancel { factor, result, next, .. } => {
            factor.iter_mut().for_each(|x| f(x));
            f(result);
            visit(next, f);
        }
        Node::Conjugate { next, .. } => visit(next, f),
        Node::Split { zero, nonzero, .. } => {
            visit(zero, f);
            visit(nonzero, f);
        }
        Node::Contradiction { scale, terms, .. } => {
            f(scale);
            for t in terms {
                f(&mut t.coef);
                for x in &mut t.factors {
                    match x {
                        Factor::Atom(x) | Factor::Sq(x) | Factor::Abs2(x) => f(x),
                    }
                }
            }
        }
    }
}

/// Number of coefficient-bearing fields.
pub fn fields(c: &Certificate) -> usize {
    let mut c = c.clone();
    let mut count = 0;
    visit(&mut c.tree, &mut |_| count += 1);
    count
}

pub const CORRUPTIONS: usize = 4;

/// Rewrites field `k` in one of `CORRUPTIONS` ways; `None` when the rewrite leaves it unchanged.
pub fn corrupt_at(c: &Certificate, k: usize, how: usize) -> Option<Certificate> {
    let mut c = c.clone();
    let mut seen = 0;
    let mut changed = true;
    visit(&mut c.tree, &mut |s| {
        if seen == k {
            if how != 2 && s.trim() == "0" {
                changed = false;
            }
            *s = match how {
                0 => format!("2*({})", s),
                1 => format!("-({})", s),
                2 => format!("({}) + 1", s),
                _ => format!("1/3*({})", s),
            };
        }
        seen += 1;
    });
    changed.then_some(c)
}
