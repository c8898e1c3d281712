use super::group::FiniteGroupModel;

/// Conjugacy classes of a group model.
///
/// Classes are listed in order of their representatives, and the
/// representative is the class member with the smallest element index
/// (equivalently, the shortlex-least word).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClasses {
    pub reps: Vec<usize>,
    pub sizes: Vec<usize>,
    pub class_of: Vec<usize>,
}

impl ConjugacyClasses {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn group_order(&self) -> usize {
        self.class_of.len()
    }

    /// Rebuilds representatives and sizes from a class assignment whose
    /// class indices are already fixed.
    pub fn from_assignment(class_of: Vec<usize>, count: usize) -> Self {
        let mut reps = vec![usize::MAX; count];
        let mut sizes = vec![0; count];
        for (g, &c) in class_of.iter().enumerate() {
            sizes[c] += 1;
            reps[c] = reps[c].min(g);
        }
        Self { reps, sizes, class_of }
    }
}

/// Orbits of the conjugation action, expanded from each unclassified element
/// by conjugating with the generators.
pub fn conjugacy_classes(g: &FiniteGroupModel) -> ConjugacyClasses {
    let gens: Vec<usize> = g
        .generators()
        .iter()
        .map(|&s| g.generator_element(s).unwrap())
        .collect();
    let mut class_of = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    let mut sizes = Vec::new();
    for e in 0..g.order() {
        if class_of[e] != usize::MAX {
            continue;
        }
        let c = reps.len();
        class_of[e] = c;
        let mut orbit = vec![e];
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head];
            head += 1;
            for &s in &gens {
                let y = g.mul(g.mul(s, x), s);
                if class_of[y] == usize::MAX {
                    class_of[y] = c;
                    orbit.push(y);
                }
            }
        }
        reps.push(e);
        sizes.push(orbit.len());
    }
    ConjugacyClasses { reps, sizes, class_of }
}
