//! Exact feasibility for small linear programs over Q.
//!
//! Only the phase-one problem of the simplex method is solved. Bland's rule
//! keeps it from cycling; most systems built here are degenerate.

use num_traits::{One, Signed, Zero};

use super::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    LessEq,
    GreaterEq,
    Equal,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coefficients: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// A system of linear constraints. Variables are free unless marked
/// nonnegative.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    num_vars: usize,
    nonnegative: Vec<bool>,
    constraints: Vec<Constraint>,
}

impl LinearSystem {
    pub fn new(num_vars: usize) -> Self {
        LinearSystem {
            num_vars,
            nonnegative: vec![false; num_vars],
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn set_nonnegative(&mut self, var: usize) {
        self.nonnegative[var] = true;
    }

    pub fn all_nonnegative(mut self) -> Self {
        self.nonnegative.iter_mut().for_each(|b| *b = true);
        self
    }

    pub fn add(&mut self, coefficients: Vec<Rational>, relation: Relation, rhs: Rational) {
        assert_eq!(coefficients.len(), self.num_vars);
        self.constraints.push(Constraint {
            coefficients,
            relation,
            rhs,
        });
    }

    /// Checks a candidate point exactly against every constraint.
    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        if x.len() != self.num_vars {
            return false;
        }
        if self
            .nonnegative
            .iter()
            .zip(x)
            .any(|(&nn, v)| nn && v.is_negative())
        {
            return false;
        }
        self.constraints.iter().all(|c| {
            let lhs = c
                .coefficients
                .iter()
                .zip(x)
                .fold(Rational::zero(), |acc, (a, v)| acc + a * v);
            match c.relation {
                Relation::LessEq => lhs <= c.rhs,
                Relation::GreaterEq => lhs >= c.rhs,
                Relation::Equal => lhs == c.rhs,
            }
        })
    }

    /// A feasible point, or `None` if the system is infeasible.
    pub fn feasible_point(&self) -> Option<Vec<Rational>> {
        // Column layout: for each original variable one column (nonnegative)
        // or two (x = x+ - x-), then one slack/surplus per inequality, then
        // one artificial per row.
        let mut var_cols: Vec<(usize, Option<usize>)> = Vec::with_capacity(self.num_vars);
        let mut ncols = 0;
        for &nn in &self.nonnegative {
            if nn {
                var_cols.push((ncols, None));
                ncols += 1;
            } else {
                var_cols.push((ncols, Some(ncols + 1)));
                ncols += 2;
            }
        }
        let m = self.constraints.len();
        let mut slack_of_row = vec![None; m];
        for (i, c) in self.constraints.iter().enumerate() {
            if c.relation != Relation::Equal {
                slack_of_row[i] = Some(ncols);
                ncols += 1;
            }
        }
        let art_start = ncols;
        ncols += m;
        let width = ncols + 1;

        let mut tab = vec![Rational::zero(); m * width];
        for (i, c) in self.constraints.iter().enumerate() {
            let row = &mut tab[i * width..(i + 1) * width];
            for (v, a) in c.coefficients.iter().enumerate() {
                let (pos, neg) = var_cols[v];
                row[pos] = a.clone();
                if let Some(neg) = neg {
                    row[neg] = -a.clone();
                }
            }
            if let Some(s) = slack_of_row[i] {
                row[s] = match c.relation {
                    Relation::LessEq => Rational::one(),
                    _ => -Rational::one(),
                };
            }
            row[ncols] = c.rhs.clone();
            if row[ncols].is_negative() {
                row.iter_mut().for_each(|x| *x = -x.clone());
            }
            row[art_start + i] = Rational::one();
        }

        let mut basis: Vec<usize> = (0..m).map(|i| art_start + i).collect();
        // Reduced costs of the phase-one objective (sum of artificials).
        let mut cost = vec![Rational::zero(); width];
        for j in 0..width {
            if (art_start..ncols).contains(&j) {
                continue;
            }
            let s = (0..m).fold(Rational::zero(), |acc, i| acc + &tab[i * width + j]);
            cost[j] = -s;
        }

        while let Some(enter) = (0..ncols).find(|&j| cost[j].is_negative()) {
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..m {
                let a = &tab[i * width + enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &tab[i * width + ncols] / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            // Phase one is bounded below by zero, so a ratio always exists.
            let (r, _) = leave.expect("phase-one objective is bounded");
            let piv = tab[r * width + enter].clone();
            for j in 0..width {
                let v = &tab[r * width + j] / &piv;
                tab[r * width + j] = v;
            }
            for i in 0..m {
                if i == r {
                    continue;
                }
                let f = tab[i * width + enter].clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..width {
                    let v = &tab[i * width + j] - &f * &tab[r * width + j];
                    tab[i * width + j] = v;
                }
            }
            let f = cost[enter].clone();
            for j in 0..width {
                let v = &cost[j] - &f * &tab[r * width + j];
                cost[j] = v;
            }
            basis[r] = enter;
        }

        // cost[rhs] holds minus the objective value.
        if !cost[ncols].is_zero() {
            return None;
        }
        let mut values = vec![Rational::zero(); ncols];
        for (i, &b) in basis.iter().enumerate() {
            values[b] = tab[i * width + ncols].clone();
        }
        let x: Vec<Rational> = var_cols
            .iter()
            .map(|&(pos, neg)| match neg {
                Some(neg) => &values[pos] - &values[neg],
                None => values[pos].clone(),
            })
            .collect();
        debug_assert!(self.satisfied_by(&x));
        Some(x)
    }
}
