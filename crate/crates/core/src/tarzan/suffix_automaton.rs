//! Suffix automaton with end-position counts, giving the number of
//! (possibly overlapping) occurrences of any pattern in `O(|pattern|)`.

use std::collections::BTreeMap;

#[derive(Clone, Debug, Default)]
struct State {
    len: usize,
    link: Option<usize>,
    next: BTreeMap<char, usize>,
    occurrences: usize,
}

#[derive(Clone, Debug)]
pub(crate) struct SuffixAutomaton {
    states: Vec<State>,
}

impl SuffixAutomaton {
    pub(crate) fn new(text: &[char]) -> Self {
        let mut states = Vec::with_capacity(2 * text.len().max(1));
        states.push(State::default());
        let mut last = 0;
        for &c in text {
            let cur = states.len();
            states.push(State {
                len: states[last].len + 1,
                link: None,
                next: BTreeMap::new(),
                occurrences: 1,
            });
            let mut p = Some(last);
            while let Some(pi) = p {
                if states[pi].next.contains_key(&c) {
                    break;
                }
                states[pi].next.insert(c, cur);
                p = states[pi].link;
            }
            match p {
                None => states[cur].link = Some(0),
                Some(pi) => {
                    let q = states[pi].next[&c];
                    if states[pi].len + 1 == states[q].len {
                        states[cur].link = Some(q);
                    } else {
                        let clone = states.len();
                        states.push(State {
                            len: states[pi].len + 1,
                            link: states[q].link,
                            next: states[q].next.clone(),
                            occurrences: 0,
                        });
                        let mut walk = Some(pi);
                        while let Some(wi) = walk {
                            if states[wi].next.get(&c) != Some(&q) {
                                break;
                            }
                            states[wi].next.insert(c, clone);
                            walk = states[wi].link;
                        }
                        states[q].link = Some(clone);
                        states[cur].link = Some(clone);
                    }
                }
            }
            last = cur;
        }

        // Propagate end-position counts up the suffix-link tree, longest first.
        let mut order: Vec<usize> = (1..states.len()).collect();
        order.sort_by_key(|&s| std::cmp::Reverse(states[s].len));
        for s in order {
            if let Some(parent) = states[s].link {
                states[parent].occurrences += states[s].occurrences;
            }
        }
        SuffixAutomaton { states }
    }

    /// Occurrences of a non-empty `pattern`.
    pub(crate) fn count(&self, pattern: &[char]) -> usize {
        let mut state = 0;
        for c in pattern {
            match self.states[state].next.get(c) {
                Some(&s) => state = s,
                None => return 0,
            }
        }
        if state == 0 {
            0
        } else {
            self.states[state].occurrences
        }
    }
}
