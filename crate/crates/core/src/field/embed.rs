use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::{Fe, Field, FieldDesc, TABLE_LIMIT};
use crate::error::{Error, Result};
use crate::poly::UniPoly;

/// A fixed field homomorphism `sub -> sup`.
///
/// The generator of `sub` is sent to the smallest-index root of its minimal
/// polynomial in `sup`, so the copy of `sub` inside `sup` is reproducible.
#[derive(Debug)]
pub struct Embedding {
    pub sub: Field,
    pub sup: Field,
    gen_image: Fe,
    table: Option<Vec<Fe>>,
    back: Option<HashMap<Fe, Fe>>,
}

type Key = (u64, Vec<u64>, Vec<u64>);

fn cache() -> &'static Mutex<HashMap<Key, Arc<Embedding>>> {
    static C: OnceLock<Mutex<HashMap<Key, Arc<Embedding>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The cached embedding of `sub` into `sup`.
pub fn embedding(sub: &Field, sup: &Field) -> Result<Arc<Embedding>> {
    if sub.characteristic() != sup.characteristic() || !sup.degree().is_multiple_of(sub.degree()) {
        return Err(Error::NoEmbedding { sub: sub.degree(), sup: sup.degree() });
    }
    let key = (sub.characteristic(), sub.modulus().to_vec(), sup.modulus().to_vec());
    if let Some(e) = cache().lock().unwrap().get(&key) {
        return Ok(e.clone());
    }
    let e = Arc::new(Embedding::build(sub, sup));
    cache().lock().unwrap().insert(key, e.clone());
    Ok(e)
}

impl Embedding {
    fn build(sub: &Field, sup: &Field) -> Embedding {
        let gen_image = if sub.degree() == 1 {
            Fe::ZERO
        } else {
            let m = UniPoly::from_coeffs(sub.modulus().iter().map(|&c| Fe(c)).collect());
            // prime-field coefficients have the same index in every extension
            *m.roots(sup).first().expect("minimal polynomial splits in the extension")
        };
        let mut e = Embedding { sub: sub.clone(), sup: sup.clone(), gen_image, table: None, back: None };
        if sub.order() <= TABLE_LIMIT {
            let table: Vec<Fe> = sub.elements().map(|a| e.apply_slow(a)).collect();
            e.back = Some(table.iter().enumerate().map(|(i, &b)| (b, Fe(i as u64))).collect());
            e.table = Some(table);
        }
        e
    }

    fn apply_slow(&self, a: Fe) -> Fe {
        if self.sub.degree() == 1 {
            return a;
        }
        let sup: &FieldDesc = &self.sup;
        self.sub
            .coeffs(a)
            .iter()
            .rev()
            .fold(Fe::ZERO, |acc, &c| sup.add(sup.mul(acc, self.gen_image), Fe(c)))
    }

    pub fn apply(&self, a: Fe) -> Fe {
        match &self.table {
            Some(t) => t[a.0 as usize],
            None => self.apply_slow(a),
        }
    }

    /// Inverse image of an element of the embedded copy; `None` outside it.
    pub fn preimage(&self, b: Fe) -> Option<Fe> {
        if let Some(back) = &self.back {
            return back.get(&b).copied();
        }
        if self.sub.degree() == 1 {
            return (b.0 < self.sub.characteristic()).then_some(b);
        }
        None
    }
}

/// Embeds `a` from `sub` into `sup`.
pub fn embed(a: Fe, sub: &Field, sup: &Field) -> Result<Fe> {
    Ok(embedding(sub, sup)?.apply(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn embedding_examples() {
        let f2 = make_field(2, 1, None).unwrap();
        let f4 = make_field(2, 2, None).unwrap();
        let f8 = make_field(2, 3, None).unwrap();
        let f16 = make_field(2, 4, None).unwrap();
        assert_eq!(embed(Fe::ONE, &f2, &f4).unwrap(), Fe::ONE);
        assert_eq!(embedding(&f4, &f8).unwrap_err(), Error::NoEmbedding { sub: 2, sup: 3 });
        let e = embedding(&f4, &f16).unwrap();
        for a in f4.elements() {
            assert_eq!(e.apply(f4.mul(a, a)), f16.mul(e.apply(a), e.apply(a)));
        }
    }

    #[test]
    fn embeddings_are_injective_homomorphisms() {
        for (p, h1, h2) in [(2, 2, 4), (2, 3, 6), (3, 1, 2), (3, 2, 4), (5, 1, 3), (7, 2, 4)] {
            let sub = make_field(p, h1, None).unwrap();
            let sup = make_field(p, h2, None).unwrap();
            let e = embedding(&sub, &sup).unwrap();
            let mut seen = std::collections::HashSet::new();
            for a in sub.elements() {
                assert!(seen.insert(e.apply(a)));
                assert_eq!(e.preimage(e.apply(a)), Some(a));
                for b in sub.elements().step_by(((sub.order() / 16).max(1)) as usize) {
                    assert_eq!(e.apply(sub.add(a, b)), sup.add(e.apply(a), e.apply(b)));
                    assert_eq!(e.apply(sub.mul(a, b)), sup.mul(e.apply(a), e.apply(b)));
                }
            }
            assert_eq!(e.apply(Fe::ONE), Fe::ONE);
        }
    }
}
