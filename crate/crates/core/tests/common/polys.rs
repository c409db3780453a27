//! Small polynomials described by plain data, with generators and
//! oracles that do not go through the library.

#![allow(dead_code)]

use rand::Rng;
use wred::fin::{Fam, Fin};
use wred::poly::{Classification, PolyRed};

/// One arity element: the base element it is reindexed to and the size of
/// its reduction fibre.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arg {
    pub to: usize,
    pub reds: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsShape {
    pub over: usize,
    pub args: Vec<Arg>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shape {
    pub bases: usize,
    pub cons: Vec<ConsShape>,
}

impl Shape {
    pub fn build(&self) -> PolyRed {
        let base = Fin::new((0..self.bases).map(|z| format!("z{z}"))).unwrap();
        let cons = Fam::new(
            self.bases,
            self.cons.iter().enumerate().map(|(y, c)| (format!("y{y}"), c.over)),
        )
        .unwrap();
        let mut arity = Vec::new();
        let mut reindex = Vec::new();
        let mut red = Vec::new();
        for (y, c) in self.cons.iter().enumerate() {
            for a in &c.args {
                let x = arity.len();
                arity.push((format!("x{x}"), y));
                reindex.push(a.to);
                for _ in 0..a.reds {
                    red.push((format!("r{}", red.len()), x));
                }
            }
        }
        let arity = Fam::new(self.cons.len(), arity).unwrap();
        let red = Fam::new(arity.len(), red).unwrap();
        PolyRed::new(base, cons, arity, reindex, red).unwrap()
    }

    /// Arity elements, numbered as in [`Shape::build`], that carry a
    /// reduction but leave their constructor's base element.
    pub fn incoherent_arities(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut x = 0;
        for c in &self.cons {
            for a in &c.args {
                if a.reds > 0 && a.to != c.over {
                    out.push(x);
                }
                x += 1;
            }
        }
        out
    }

    pub fn classification(&self) -> Classification {
        let most = self
            .cons
            .iter()
            .map(|c| c.args.iter().filter(|a| a.reds > 0).count())
            .max()
            .unwrap_or(0);
        match most {
            0 => Classification::NoReductions,
            1 => Classification::Decidable,
            _ => Classification::General,
        }
    }

    pub fn size(&self) -> usize {
        self.bases
            + self.cons.len()
            + self.cons.iter().map(|c| c.args.len() + c.args.iter().map(|a| a.reds).sum::<usize>()).sum::<usize>()
    }
}

/// Fibres of `W^S` that are inhabited: the least set containing `S` and
/// closed under the constructors with no reduction.
pub fn inhabited(shape: &Shape, s: u32) -> u32 {
    let mut marked = s;
    loop {
        let before = marked;
        for c in &shape.cons {
            let plain = c.args.iter().all(|a| a.reds == 0);
            if plain && c.args.iter().all(|a| marked & (1 << a.to) != 0) {
                marked |= 1 << c.over;
            }
        }
        if marked == before {
            return marked;
        }
    }
}

pub fn is_closed(shape: &Shape, s: u32) -> bool {
    let inh = inhabited(shape, s);
    shape.cons.iter().all(|c| {
        let double = c.args.iter().filter(|a| a.reds > 0).count() >= 2;
        let total = c.args.iter().all(|a| inh & (1 << a.to) != 0);
        !(double && total) || s & (1 << c.over) != 0
    })
}

/// The intersection of every closed subset of the context.
pub fn least_closed(shape: &Shape) -> u32 {
    let all = (1u32 << shape.bases) - 1;
    (0..=all).filter(|&s| is_closed(shape, s)).fold(all, |acc, s| acc & s)
}

fn multisets<T: Clone>(items: &[T], max: usize) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<(usize, Vec<T>)> = vec![(0, Vec::new())];
    for _ in 0..max {
        let mut next = Vec::new();
        for (start, m) in &frontier {
            for (i, item) in items.iter().enumerate().skip(*start) {
                let mut m2 = m.clone();
                m2.push(item.clone());
                out.push(m2.clone());
                next.push((i, m2));
            }
        }
        frontier = next;
    }
    out
}

/// Every coherent polynomial on `bases` elements whose fibres have at most
/// two elements, up to reordering within fibres; reduction fibres have at
/// most `max_reds` elements.
pub fn for_each_coherent(bases: usize, max_reds: usize, mut f: impl FnMut(&Shape)) {
    let per_base: Vec<Vec<Vec<ConsShape>>> = (0..bases)
        .map(|z| {
            let mut args: Vec<Arg> = (0..bases).map(|to| Arg { to, reds: 0 }).collect();
            args.extend((1..=max_reds).map(|reds| Arg { to: z, reds }));
            let shapes: Vec<ConsShape> = multisets(&args, 2)
                .into_iter()
                .map(|args| ConsShape { over: z, args })
                .collect();
            multisets(&shapes, 2)
        })
        .collect();
    let mut choice = vec![0usize; bases];
    loop {
        let cons = choice
            .iter()
            .enumerate()
            .flat_map(|(z, &k)| per_base[z][k].iter().cloned())
            .collect();
        f(&Shape { bases, cons });
        let mut z = 0;
        loop {
            if z == bases {
                return;
            }
            choice[z] += 1;
            if choice[z] < per_base[z].len() {
                break;
            }
            choice[z] = 0;
            z += 1;
        }
    }
}

/// A random polynomial with fibres of at most two elements. When
/// `coherent` is false reductions may sit anywhere.
pub fn random_shape(rng: &mut impl Rng, max_bases: usize, coherent: bool) -> Shape {
    let bases = rng.gen_range(1..=max_bases);
    let mut cons = Vec::new();
    for over in 0..bases {
        for _ in 0..rng.gen_range(0..=2) {
            let args = (0..rng.gen_range(0..=2))
                .map(|_| {
                    let to = rng.gen_range(0..bases);
                    let reds = if !coherent || to == over { rng.gen_range(0..=2) } else { 0 };
                    Arg { to, reds }
                })
                .collect();
            cons.push(ConsShape { over, args });
        }
    }
    Shape { bases, cons }
}
