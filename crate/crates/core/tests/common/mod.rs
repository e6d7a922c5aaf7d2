#![allow(dead_code)]

use blowup_chern::{EmbeddingModel, GeneratorSpec, GradedElement, ManifoldModel, Monomial, Pairing, Ring, RingMap};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_homogeneous(rng: &mut ChaCha8Rng, ring: &Ring, w: u32, spread: i128) -> GradedElement {
    let mut acc = ring.zero();
    for m in blowup_chern::ring::monomials_of_weight(ring.weights(), w) {
        let c = rng.gen_range(-spread..=spread);
        acc += &ring.monomial(&m).scale(c);
    }
    acc
}

/// `Z[A, B] / (A^{p+1}, B^{q+1})`, the cohomology of `P^p × P^q`.
pub fn product_of_projective(a: &str, b: &str, p: u32, q: u32) -> Ring {
    let g = vec![GeneratorSpec::new(a, 1), GeneratorSpec::new(b, 1)];
    let free = Ring::free(g.clone()).unwrap();
    let rels = vec![free.generator(a).unwrap().pow(p + 1), free.generator(b).unwrap().pow(q + 1)];
    Ring::new(g, rels, p + q).unwrap()
}

pub fn top_pairing(ring: &Ring, exps: Vec<u32>) -> Pairing {
    Pairing::new(ring, vec![(Monomial::from_exponents(exps), 1)]).unwrap()
}

#[derive(Clone, Debug)]
pub struct Shape {
    pub n: [u32; 2],
    pub a: [u32; 2],
}

impl Shape {
    pub fn k(&self) -> u32 {
        self.n[0] - self.a[0] + self.n[1] - self.a[1]
    }
}

/// A linear `P^{a1} × P^{a2}` inside `P^{n1} × P^{n2}` with random, but
/// consistent, Chern data: `C(X)` and `c_1..c_{k-1}` are arbitrary, `c_k` is
/// the restriction of the dual class, and `C(M)` is a lift of `C(X)·C(γ)`
/// shifted by random elements of the kernel of the restriction.
pub fn random_embedding(rng: &mut ChaCha8Rng, max_dim: u32, max_k: u32) -> (Shape, EmbeddingModel) {
    let shape = loop {
        let n1 = rng.gen_range(1..=max_dim);
        let n2 = rng.gen_range(0..=max_dim - n1);
        let a1 = rng.gen_range(0..=n1);
        let a2 = rng.gen_range(0..=n2);
        let s = Shape { n: [n1, n2], a: [a1, a2] };
        if (2..=max_k).contains(&s.k()) {
            break s;
        }
    };
    let model = embedding_for(rng, &shape);
    (shape, model)
}

pub fn embedding_for(rng: &mut ChaCha8Rng, s: &Shape) -> EmbeddingModel {
    let [n1, n2] = s.n;
    let [a1, a2] = s.a;
    let k = s.k();
    let m_ring = product_of_projective("H1", "H2", n1, n2);
    let dim_x = a1 + a2;
    let x_ring = if dim_x == 0 { Ring::point() } else { product_of_projective("h1", "h2", a1, a2) };
    let img = |name: &str, cap: u32| {
        if cap == 0 || dim_x == 0 {
            x_ring.zero()
        } else {
            x_ring.generator(name).unwrap()
        }
    };
    let restrict = RingMap::new(&m_ring, &x_ring, vec![("H1", img("h1", a1)), ("H2", img("h2", a2))]).unwrap();
    let dual = &m_ring.generator("H1").unwrap().pow(n1 - a1) * &m_ring.generator("H2").unwrap().pow(n2 - a2);
    let ck = restrict.apply(&dual).unwrap();
    let mut normal = x_ring.one();
    for r in 1..k {
        normal += &random_homogeneous(rng, &x_ring, r, 3);
    }
    normal += &ck;
    let mut cx = x_ring.one();
    for r in 1..=dim_x {
        cx += &random_homogeneous(rng, &x_ring, r, 4);
    }
    let target = &cx * &normal;
    let mut cm = restrict.preimage(&target).unwrap().expect("restriction is onto");
    for w in 1..=n1 + n2 {
        for y in restrict.kernel_generators(w) {
            let c = rng.gen_range(-2..=2);
            cm += &y.scale(c);
        }
    }
    let m_pairing = top_pairing(&m_ring, vec![n1, n2]);
    let x_pairing =
        if dim_x == 0 { Pairing::new(&x_ring, vec![]).unwrap() } else { top_pairing(&x_ring, vec![a1, a2]) };
    let m = ManifoldModel::new("M", 2 * (n1 + n2), m_ring, cm, Some(m_pairing)).unwrap();
    let x = ManifoldModel::new("X", 2 * dim_x, x_ring, cx, Some(x_pairing)).unwrap();
    EmbeddingModel::new(format!("random_{n1}_{n2}_{a1}_{a2}"), m, x, restrict, normal, dual).unwrap()
}
