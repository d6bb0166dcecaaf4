use rand::Rng;

use crate::seed;
use crate::textperturb::tokenize;

/// Deterministic bag-of-tokens embedding.
///
/// Each lowercase token maps, under `seed`, to a pseudo-random vector with
/// entries ±1/√dim. A sentence vector is the normalized sum of its token
/// vectors. Tokens are summed in sorted order, so sentences with the same
/// token multiset get bit-identical vectors. Empty texts use the vector of
/// the empty token.
pub fn mock_encode(texts: &[String], dim: usize, seed: u64) -> Vec<Vec<f64>> {
    texts.iter().map(|t| encode_text(t, dim, seed)).collect()
}

fn token_vector(token: &str, dim: usize, seed: u64) -> impl Iterator<Item = f64> {
    let scale = 1.0 / (dim as f64).sqrt();
    let mut rng = seed::rng(seed::substream(seed, token));
    (0..dim).map(move |_| if rng.gen::<bool>() { scale } else { -scale })
}

fn encode_text(text: &str, dim: usize, seed: u64) -> Vec<f64> {
    let mut tokens: Vec<String> = tokenize(text).iter().map(|t| t.to_lowercase()).collect();
    if tokens.is_empty() {
        tokens.push(String::new());
    }
    tokens.sort();
    let mut sum = vec![0.0; dim];
    for t in &tokens {
        for (s, x) in sum.iter_mut().zip(token_vector(t, dim, seed)) {
            *s += x;
        }
    }
    let norm = sum.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        sum.iter_mut().for_each(|x| *x /= norm);
    } else {
        // Token vectors cancelled exactly; fall back to the first one.
        sum = token_vector(&tokens[0], dim, seed).collect();
    }
    sum
}
