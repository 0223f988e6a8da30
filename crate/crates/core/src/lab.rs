//! A cached workspace for one `(R, n)`: the enumerated groups are expensive,
//! and most suites ask for the same ones repeatedly.

use std::sync::{Arc, Mutex, OnceLock};

use rustc_hash::FxHashMap;

use crate::error::{GroupError, MatError};
use crate::matrix::{GroupElement, Mat, MatSpace};
use crate::ring::{Elem, FiniteRing, Ideal, RingHom};
use crate::subgroup::{
    self, congruence_pair, enumerate_gl, CongruencePair, GeneralLinear, SubgroupClosure,
};

/// `R/I` together with its own lab.
#[derive(Debug)]
pub struct QuotientLevel {
    pub hom: RingHom,
    pub lab: Arc<GroupLab>,
}

#[derive(Debug)]
pub struct GroupLab {
    space: MatSpace,
    cap: usize,
    ideals: Vec<Ideal>,
    gl: OnceLock<Result<Arc<GeneralLinear>, GroupError>>,
    elementary: OnceLock<Arc<SubgroupClosure>>,
    relative: Mutex<FxHashMap<Vec<Elem>, Arc<SubgroupClosure>>>,
    congruence: Mutex<FxHashMap<Vec<Elem>, Arc<CongruencePair>>>,
    quotients: Mutex<FxHashMap<Vec<Elem>, Arc<QuotientLevel>>>,
}

impl GroupLab {
    pub fn new(ring: Arc<FiniteRing>, n: usize, cap: usize) -> Result<Self, MatError> {
        let ideals = ring.all_ideals();
        Ok(GroupLab {
            space: MatSpace::new(ring, n)?,
            cap,
            ideals,
            gl: OnceLock::new(),
            elementary: OnceLock::new(),
            relative: Mutex::default(),
            congruence: Mutex::default(),
            quotients: Mutex::default(),
        })
    }

    pub fn space(&self) -> &MatSpace {
        &self.space
    }

    pub fn ring(&self) -> &FiniteRing {
        self.space.ring()
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Every two-sided ideal, smallest first.
    pub fn ideals(&self) -> &[Ideal] {
        &self.ideals
    }

    /// All non-identity transvections; they generate `E(n, R)`.
    pub fn transvections(&self) -> Vec<GroupElement> {
        let all: Vec<Elem> = self.ring().elements().collect();
        subgroup::transvections_over(&self.space, &all)
    }

    pub fn gl(&self) -> Result<Arc<GeneralLinear>, GroupError> {
        self.gl
            .get_or_init(|| enumerate_gl(&self.space, self.cap).map(Arc::new))
            .clone()
    }

    pub fn elementary(&self) -> Arc<SubgroupClosure> {
        self.elementary
            .get_or_init(|| Arc::new(subgroup::elementary_group(&self.space, self.cap)))
            .clone()
    }

    /// `E(n, I)`, built from the conjugated generator set.
    pub fn relative_elementary(&self, ideal: &Ideal) -> Arc<SubgroupClosure> {
        let key = ideal.members().to_vec();
        if let Some(h) = self.relative.lock().unwrap().get(&key) {
            return h.clone();
        }
        let h = Arc::new(subgroup::relative_elementary_conjugated(
            &self.space,
            ideal,
            self.cap,
        ));
        self.relative
            .lock()
            .unwrap()
            .entry(key)
            .or_insert(h)
            .clone()
    }

    /// `R/I` and its lab; `None` for `I = R`.
    pub fn quotient(&self, ideal: &Ideal) -> Result<Option<Arc<QuotientLevel>>, GroupError> {
        if ideal.is_whole() {
            return Ok(None);
        }
        let key = ideal.members().to_vec();
        if let Some(q) = self.quotients.lock().unwrap().get(&key) {
            return Ok(Some(q.clone()));
        }
        let (ring, hom) = self.ring().quotient(ideal)?;
        let lab = GroupLab::new(Arc::new(ring), self.n(), self.cap)?;
        let level = Arc::new(QuotientLevel {
            hom,
            lab: Arc::new(lab),
        });
        Ok(Some(
            self.quotients
                .lock()
                .unwrap()
                .entry(key)
                .or_insert(level)
                .clone(),
        ))
    }

    /// Reduction data for `I`: `None` for `I = R`; the zero ideal reuses
    /// this lab's own `GL`.
    fn level_gl(&self, ideal: &Ideal) -> Result<Option<(RingHom, Arc<GeneralLinear>)>, GroupError> {
        if ideal.is_whole() {
            return Ok(None);
        }
        if ideal.is_zero() {
            return Ok(Some((RingHom::identity(self.ring()), self.gl()?)));
        }
        let q = self.quotient(ideal)?.expect("proper ideal");
        Ok(Some((q.hom.clone(), q.lab.gl()?)))
    }

    pub fn congruence(&self, ideal: &Ideal) -> Result<Arc<CongruencePair>, GroupError> {
        let key = ideal.members().to_vec();
        if let Some(c) = self.congruence.lock().unwrap().get(&key) {
            return Ok(c.clone());
        }
        let gl = self.gl()?;
        let level = self.level_gl(ideal)?;
        let pair = Arc::new(congruence_pair(
            &gl,
            ideal,
            level.as_ref().map(|(h, g)| (h, g.as_ref())),
            self.cap,
        ));
        Ok(self
            .congruence
            .lock()
            .unwrap()
            .entry(key)
            .or_insert(pair)
            .clone())
    }

    /// `g ∈ C(n, I)`: the reduction of `g` is central in `GL(n, R/I)`.
    pub fn in_center_preimage(&self, g: &Mat, ideal: &Ideal) -> Result<bool, GroupError> {
        match self.level_gl(ideal)? {
            None => Ok(true),
            Some((hom, gl_q)) => {
                let r = subgroup::reduce(&hom, gl_q.group.space(), g);
                Ok(gl_q.is_central(&r))
            }
        }
    }

    /// `g ∈ ξGL(n, R)`.
    pub fn is_central(&self, g: &Mat) -> Result<bool, GroupError> {
        Ok(self.gl()?.is_central(g))
    }
}
