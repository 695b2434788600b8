//! The acceptance checks behind `upsilon verify`. The `paper` suite compares
//! computed invariants with closed forms; the property suite runs seeded
//! randomized and exhaustive checks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::continuation::{
    edge_transform, find_layering_set, initial_transform, invariant_factor_bound, is_symplectic, spike_transform, u0_matrix_a, u0_via_continuation,
};
use crate::error::{Error, Result};
use crate::exact_algebra::{
    charpoly, cokernel, div_rem, kernel_generators_mod_n, root_multiplicity, smith_diagonal, to_rational, ExactMatrix, ModuleDecomposition, Ring,
    Scalar,
};
use crate::families::{self, figures};
use crate::fundamental::{charpoly_divisibility_check, critical_group, upsilon};
use crate::layering::{degenerate_weights_general, is_completely_reducible, is_layerable, reduce_to_flower, reduce_to_flower_random, replay};
use crate::network::{pullback_harmonic, pushforward_covering, residues, Network};
use crate::partial_graph::{bipartite_double_cover, find_isomorphism, PartialGraph};
use crate::planar::{dual_graph, random_circular_planar, random_unit_network, verify_duality};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Paper,
    Property,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriterionResult {
    pub number: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionResult {
    pub fn detail_suffix(&self) -> String {
        if self.detail.is_empty() {
            String::new()
        } else {
            format!(" ({})", self.detail)
        }
    }
}

type Check = fn() -> Result<String>;

const CRITERIA: [(usize, &str, Suite, Check); 14] = [
    (1, "complete bipartite fundamental modules", Suite::Paper, complete_bipartite),
    (2, "critical groups of complete graphs", Suite::Paper, complete_graphs),
    (3, "critical groups of wheels", Suite::Paper, wheels),
    (4, "U0 of CLF and CLF' over Q/Z", Suite::Paper, clf_families),
    (5, "worked continuation example", Suite::Paper, worked_example),
    (6, "cube invariant factor counts", Suite::Paper, cubes),
    (7, "layerability characterization", Suite::Property, layerability),
    (8, "flower confluence", Suite::Property, flower_confluence),
    (9, "planar duality", Suite::Property, duality),
    (10, "symplectic boundary transforms", Suite::Property, symplectic),
    (11, "three presentations of U0", Suite::Property, cross_oracle),
    (12, "spectral multiplicities and divisibility", Suite::Paper, spectral),
    (13, "rotation symmetry counting", Suite::Paper, symmetry),
    (14, "bipartite obstruction to complete reducibility", Suite::Paper, bipartite_obstruction),
];

/// Run one suite, checks in parallel, results in criterion order.
pub fn run_suite(suite: Suite) -> Vec<CriterionResult> {
    let chosen: Vec<_> = CRITERIA.iter().filter(|c| c.2 == suite).collect();
    std::thread::scope(|s| {
        let handles: Vec<_> = chosen.iter().map(|&&(number, name, _, check)| (number, name, s.spawn(check))).collect();
        handles
            .into_iter()
            .map(|(number, name, h)| {
                let (passed, detail) = match h.join() {
                    Ok(Ok(d)) => (true, d),
                    Ok(Err(e)) => (false, e.to_string()),
                    Err(_) => (false, "check panicked".to_string()),
                };
                CriterionResult { number, name, passed, detail }
            })
            .collect()
    })
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Internal(what()))
    }
}

fn big(v: u64) -> BigInt {
    BigInt::from(v)
}

fn complete_bipartite() -> Result<String> {
    for m in 2..=6 {
        for n in 2..=6 {
            let got = upsilon(&Network::standard(families::complete_bipartite_bi(m, n))?)?.decomposition;
            let want = ModuleDecomposition::from_i64(m, &vec![m as i64; n - 1]);
            ensure(got == want, || format!("K_{{{m},{n}}}: {got} != {want}"))?;
        }
    }
    Ok("25 graphs".into())
}

fn complete_graphs() -> Result<String> {
    for n in 3..=8usize {
        let g = families::complete_graph(n, &[])?;
        let got = critical_group(&g)?;
        let want = ModuleDecomposition::from_i64(0, &vec![n as i64; n - 2]);
        ensure(got == want, || format!("K_{n}: {got} != {want}"))?;
        let s: Vec<usize> = (0..n - 1).collect();
        let bound = invariant_factor_bound(&g, &s)?;
        ensure(bound == got.invariant_factors.len(), || format!("K_{n}: bound {bound} not attained"))?;
    }
    Ok("n = 3..8".into())
}

fn fibonacci(n: usize) -> BigInt {
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    for _ in 0..n {
        let c = &a + &b;
        a = b;
        b = c;
    }
    a
}

fn wheels() -> Result<String> {
    for n in 3..=12 {
        let got = critical_group(&families::wheel(n, false)?.graph)?;
        let want = if n % 2 == 1 {
            let l = fibonacci(n - 1) + fibonacci(n + 1);
            ModuleDecomposition::from_cyclic_orders(0, [l.clone(), l])
        } else {
            ModuleDecomposition::from_cyclic_orders(0, [fibonacci(n), fibonacci(n) * 5])
        };
        ensure(got == want, || format!("W_{n}: {got} != {want}"))?;
    }
    Ok("n = 3..12".into())
}

/// U₀(CLF(m, n), ℚ/ℤ) in closed form.
fn clf_closed_form(m: usize, n: usize) -> ModuleDecomposition {
    let orders: Vec<BigInt> = match m % 4 {
        1 | 3 => vec![big(2); n],
        2 => vec![big(2); 2 * n],
        _ => (1..=n).flat_map(|j| {
            let g = big(4).pow(j as u32).gcd(&big(2 * m as u64));
            [g.clone(), g]
        }).collect(),
    };
    ModuleDecomposition::from_cyclic_orders(0, orders)
}

/// U₀(CLF′(m, n), ℚ/ℤ) in closed form.
fn clf_prime_closed_form(m: usize, n: usize) -> ModuleDecomposition {
    if m % 2 == 1 {
        return ModuleDecomposition::from_cyclic_orders(0, vec![big(2); n]);
    }
    let part = |k: usize| (1..=k).map(|j| big(4).pow(j as u32).gcd(&big(4 * m as u64))).collect::<Vec<_>>();
    ModuleDecomposition::from_cyclic_orders(0, part(n.div_ceil(2)).into_iter().chain(part(n / 2)))
}

fn clf_families() -> Result<String> {
    for m in 3..=12 {
        for n in 1..=3 {
            let got = Network::standard(families::clf(m, n)?)?.u0_q_mod_z()?;
            let want = clf_closed_form(m, n);
            ensure(got == want, || format!("CLF({m},{n}): {got} != {want}"))?;
        }
    }
    for m in 1..=6 {
        for n in 1..=4 {
            let got = Network::standard(families::clf_prime(m, n)?)?.u0_q_mod_z()?;
            let want = clf_prime_closed_form(m, n);
            ensure(got == want, || format!("CLF'({m},{n}): {got} != {want}"))?;
        }
    }
    Ok("30 CLF and 24 CLF' cases".into())
}

fn worked_example() -> Result<String> {
    let g = figures::algorithm_example();
    let n = Network::standard(g.clone())?;
    let s = figures::ALGORITHM_EXAMPLE_S;
    let a = u0_matrix_a(&n, &s)?.to_integer_matrix()?;
    let diag = smith_diagonal(&a)?;
    ensure(diag == vec![big(3), big(15)], || format!("Smith diagonal {diag:?}"))?;
    let u0 = u0_via_continuation(&n, &s)?;
    ensure(u0 == ModuleDecomposition::from_i64(0, &[3, 15]), || format!("U0 = {u0}"))?;
    for (values, modulus) in [([0, -1, 0, 1, 0], 3u64), ([-1, -1, 0, 0, 1], 3), ([0, 2, 0, 2, 1], 5)] {
        let unit = Scalar::residue(1, modulus)?;
        let nm = Network::new(g.clone(), vec![unit; g.num_darts()], vec![Scalar::residue(0, modulus)?; g.num_vertices()])?;
        let u = residues(&values, modulus)?;
        ensure(nm.in_u0(&u)?, || format!("generator {values:?} mod {modulus} is not in U0"))?;
    }
    Ok(format!("A = {:?}", a.int_rows()?.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>()))
}

fn cubes() -> Result<String> {
    for n in 2..=4u32 {
        let got = critical_group(&families::cube(n)?)?.invariant_factors.len();
        ensure(got == (1 << (n - 1)) - 1, || format!("Q_{n}: {got} invariant factors"))?;
    }
    Ok("n = 2, 3, 4".into())
}

/// Connected simple ∂-graphs on `n` vertices with at most `max_edges`
/// edges, one per isomorphism class.
pub fn enumerate_connected(n: usize, max_edges: usize) -> Vec<PartialGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let perms = permutations(n);
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << pairs.len()) {
        if mask.count_ones() as usize > max_edges {
            continue;
        }
        let mut adj = vec![vec![false; n]; n];
        for (i, &(a, b)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                adj[a][b] = true;
                adj[b][a] = true;
            }
        }
        if !connected(&adj) {
            continue;
        }
        for bmask in 0u32..(1 << n) {
            let key = perms
                .iter()
                .map(|p| {
                    let mut k: u64 = 0;
                    for (i, &(a, b)) in pairs.iter().enumerate() {
                        if adj[p[a]][p[b]] {
                            k |= 1 << i;
                        }
                    }
                    for (x, &px) in p.iter().enumerate() {
                        if bmask >> px & 1 == 1 {
                            k |= 1 << (pairs.len() + x);
                        }
                    }
                    k
                })
                .min()
                .unwrap_or(0);
            if seen.insert((n, key)) {
                let mut g = PartialGraph::with_vertices((0..n).map(|x| bmask >> x & 1 == 1).collect());
                for &(a, b) in &pairs {
                    if adj[a][b] {
                        g.add_edge(a, b);
                    }
                }
                out.push(g);
            }
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn connected(adj: &[Vec<bool>]) -> bool {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for y in 0..n {
            if adj[x][y] && !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn random_unit_rational<R: Rng>(rng: &mut R) -> Scalar {
    let num = rng.gen_range(1..=5i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
    Scalar::rat(num, rng.gen_range(1..=5))
}

fn layerability() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut counts = (0, 0);
    for n in 1..=5 {
        for g in enumerate_connected(n, 7) {
            let red = reduce_to_flower(&g);
            let witness = if red.is_empty() { None } else { degenerate_weights_general(&red.flower.extract(&g).graph).ok() };
            let layerable = is_layerable(&g);
            ensure(layerable == witness.is_none(), || format!("layerability disagrees with the flower witness on {g:?}"))?;
            if layerable {
                counts.0 += 1;
                for _ in 0..20 {
                    let w = g.edges().iter().map(|_| random_unit_rational(&mut rng)).collect();
                    let net = Network::from_edge_weights(g.clone(), w, vec![Scalar::rat(0, 1); n])?;
                    ensure(net.is_nondegenerate()?, || format!("degenerate weights on a layerable graph {g:?}"))?;
                }
            } else {
                counts.1 += 1;
            }
        }
    }
    Ok(format!("{} layerable, {} not", counts.0, counts.1))
}

/// A random connected multigraph-free ∂-graph.
pub fn random_partial_graph<R: Rng>(rng: &mut R, max_vertices: usize, extra_edges: usize) -> PartialGraph {
    let n = rng.gen_range(2..=max_vertices.max(2));
    let mut g = PartialGraph::with_vertices((0..n).map(|_| rng.gen_bool(0.4)).collect());
    let mut adj = vec![vec![false; n]; n];
    for x in 1..n {
        let y = rng.gen_range(0..x);
        g.add_edge(y, x);
        adj[x][y] = true;
        adj[y][x] = true;
    }
    for _ in 0..rng.gen_range(0..=extra_edges) {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b && !adj[a][b] {
            g.add_edge(a, b);
            adj[a][b] = true;
            adj[b][a] = true;
        }
    }
    g
}

fn flower_confluence() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut nonempty = 0;
    for _ in 0..50 {
        let g = random_partial_graph(&mut rng, 9, 10);
        let a = reduce_to_flower_random(&g, &mut rng);
        let b = reduce_to_flower_random(&g, &mut rng);
        ensure(a.flower == b.flower, || format!("two strip orders give different flowers on {g:?}"))?;
        nonempty += usize::from(!a.is_empty());
    }
    Ok(format!("50 graphs, {nonempty} with non-empty flowers"))
}

fn duality() -> Result<String> {
    for n in 3..=10 {
        let eg = families::wheel(n, true)?;
        ensure(verify_duality(&Network::standard(eg.graph.clone())?, &eg)?, || format!("duality fails for W_{n}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..25 {
        let eg = random_circular_planar(&mut rng, 8);
        let net = random_unit_network(&mut rng, &eg);
        ensure(verify_duality(&net, &eg)?, || format!("duality fails on {eg:?}"))?;
    }
    let w5 = families::wheel(5, true)?;
    let (d, _) = dual_graph(&w5)?;
    ensure(find_isomorphism(&d.graph.all_interior(), &w5.graph.all_interior()).is_some(), || "the dual of W_5 is not W_5".into())?;
    Ok("W_3..W_10, 25 random networks, W_5 self-dual".into())
}

fn random_rational<R: Rng>(rng: &mut R) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(-6..=6i64)), BigInt::from(rng.gen_range(1..=4i64)))
}

fn random_nonzero_rational<R: Rng>(rng: &mut R) -> BigRational {
    loop {
        let r = random_rational(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

fn random_transform<R: Rng>(rng: &mut R, m: usize) -> Result<ExactMatrix> {
    Ok(match rng.gen_range(0..3) {
        0 => initial_transform(&(0..m).map(|_| random_rational(rng)).collect::<Vec<_>>()).matrix,
        1 => spike_transform(m, rng.gen_range(0..m), &random_nonzero_rational(rng), &random_rational(rng))?.matrix,
        _ => {
            let i = rng.gen_range(0..m);
            let j = (i + rng.gen_range(1..m)) % m;
            edge_transform(m, i, j, &random_nonzero_rational(rng))?.matrix
        }
    })
}

fn symplectic() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for k in 0..200 {
        let m = rng.gen_range(2..=5);
        let t = if k % 2 == 0 {
            random_transform(&mut rng, m)?
        } else {
            let mut p = ExactMatrix::identity(2 * m, Ring::Rationals);
            for _ in 0..rng.gen_range(2..=6) {
                p = random_transform(&mut rng, m)?.mul(&p)?;
            }
            p
        };
        ensure(is_symplectic(&t)?, || format!("transform {k} is not symplectic"))?;
    }
    Ok("100 single transforms and 100 products".into())
}

fn cross_oracle() -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut done = 0;
    let mut nontrivial = 0;
    while done < 30 {
        let g = random_partial_graph(&mut rng, 7, 8);
        if g.interior_vertices().is_empty() {
            continue;
        }
        let w = g.edges().iter().map(|_| Scalar::int(if rng.gen_bool(0.7) { 1 } else { -1 })).collect();
        let d = (0..g.num_vertices()).map(|_| Scalar::int(rng.gen_range(-2..=2))).collect();
        let n = Network::from_edge_weights(g.clone(), w, d)?;
        if !n.is_nondegenerate()? {
            continue;
        }
        let direct = n.u0_q_mod_z()?;
        let transpose = cokernel(&n.interior_block().transpose())?;
        let s = find_layering_set(&g);
        let via_a = u0_via_continuation(&n, &s)?;
        ensure(direct == transpose && transpose == via_a, || format!("U0 presentations differ: {direct}, {transpose}, {via_a}"))?;
        nontrivial += usize::from(!direct.is_trivial());
        done += 1;
    }
    Ok(format!("30 networks, {nontrivial} with non-trivial U0"))
}

fn derivative(p: &[BigRational]) -> Vec<BigRational> {
    let deg = p.len().saturating_sub(1);
    p.iter().take(deg).enumerate().map(|(i, c)| c * BigInt::from((deg - i) as u64)).collect()
}

fn trim(p: Vec<BigRational>) -> Vec<BigRational> {
    let k = p.iter().position(|c| !c.is_zero()).unwrap_or(p.len());
    p[k..].to_vec()
}

fn poly_gcd(a: &[BigRational], b: &[BigRational]) -> Result<Vec<BigRational>> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let (_, r) = div_rem(&a, &b)?;
        a = b;
        b = trim(r);
    }
    Ok(a)
}

fn spectral() -> Result<String> {
    for n in 3..=12 {
        let g = families::cycle(n, &[])?;
        let p = charpoly(&Network::adjacency(g)?.full_laplacian())?;
        let pr = to_rational(&p);
        let g1 = poly_gcd(&pr, &derivative(&pr))?;
        let g2 = poly_gcd(&g1, &derivative(&derivative(&pr)))?;
        ensure(g2.len() <= 1, || format!("C_{n} has an eigenvalue of multiplicity above 2"))?;
        let distinct = p.len() - g1.len();
        ensure(distinct == n / 2 + 1, || format!("C_{n} has {distinct} distinct eigenvalues"))?;
        let two = BigRational::from_integer(big(2));
        ensure(root_multiplicity(&p, &two) == 1, || format!("C_{n}: 2 is not simple"))?;
        ensure(root_multiplicity(&p, &-two) == usize::from(n % 2 == 0), || format!("C_{n}: wrong multiplicity at -2"))?;
    }
    for g in [families::cycle(3, &[])?, families::complete_graph(4, &[])?] {
        let (cover, f) = bipartite_double_cover(&g);
        ensure(charpoly_divisibility_check(&f, &Network::standard(cover)?, &Network::standard(g)?)?, || "charpoly divisibility fails".into())?;
    }
    Ok("C_3..C_12, double covers of C_3 and K_4".into())
}

fn symmetry() -> Result<String> {
    let three = big(3);
    let mut checked = 0;
    for m in 2..=5 {
        for n in 1..=2 {
            let f = families::rotation_quotient(2, m, n)?;
            let (n1, n2) = (Network::standard(f.source.clone())?, Network::standard(f.target.clone())?);
            let (a, b) = (n1.u0_mod_n(&three)?.torsion_order(), n2.u0_mod_n(&three)?.torsion_order());
            ensure((a - &b).is_even(), || format!("|U0| parity differs for m = {m}, n = {n}"))?;
            let unit = Scalar::residue(1, 3)?;
            let zero = Scalar::residue(0, 3)?;
            let mod3 = |net: &Network| Network::new(net.graph().clone(), vec![unit.clone(); net.graph().num_darts()], vec![zero.clone(); net.graph().num_vertices()]);
            let (m1, m2) = (mod3(&n1)?, mod3(&n2)?);
            let all: Vec<usize> = (0..n2.graph().num_vertices()).collect();
            let harmonic = n2.laplacian_matrix(&n2.graph().interior_vertices(), &all)?;
            for (gen, _) in kernel_generators_mod_n(&harmonic, &three)? {
                let u: Vec<Scalar> = gen.iter().map(|c| Scalar::residue(c.mod_floor(&three).try_into().unwrap_or(0), 3)).collect::<Result<_>>()?;
                let back = pushforward_covering(&f, &m1, &m2, &pullback_harmonic(&f, &m1, &m2, &u)?)?;
                let twice: Vec<Scalar> = u.iter().map(|x| x.add(x)).collect::<Result<_>>()?;
                ensure(back == twice, || format!("f_* f^* != 2 for m = {m}, n = {n}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("m = 2..5, n = 1, 2, f_* f^* = 2 on {checked} harmonic functions"))
}

fn bipartite_obstruction() -> Result<String> {
    for m in 2..=5 {
        for n in m..=6 {
            let g = families::complete_bipartite_bi(m, n);
            let (reducible, trace) = is_completely_reducible(&g);
            ensure(!reducible && !trace.irreducible_parts().is_empty(), || format!("K_{{{m},{n}}} reported reducible"))?;
            replay(&g, &trace)?;
        }
    }
    Ok("2 <= m <= n <= 6".into())
}
