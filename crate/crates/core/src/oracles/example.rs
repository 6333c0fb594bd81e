use std::sync::Arc;

use rand::Rng;

use super::rng::RngStream;
use super::QueryCounter;
use crate::boolfn::TruthTable;
use crate::error::Result;

/// A uniformly drawn input with its label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LabeledExample {
    pub x: usize,
    pub y: i8,
}

/// Anything that can hand out uniform labelled examples.
pub trait ExampleSource {
    fn n(&self) -> usize;
    fn draw_example(&mut self) -> LabeledExample;
    fn queries(&self) -> QueryCounter;
}

/// Classical EX and MQ access to a fixed table.
#[derive(Debug, Clone)]
pub struct ExampleOracle {
    target: Arc<TruthTable>,
    rng: RngStream,
    counter: QueryCounter,
}

impl ExampleOracle {
    pub fn new(target: Arc<TruthTable>, rng: RngStream) -> Self {
        ExampleOracle {
            target,
            rng,
            counter: QueryCounter::default(),
        }
    }

    /// EX: `(x, f(x))` with `x` uniform.
    pub fn ex_draw(&mut self) -> LabeledExample {
        self.counter.ex_calls += 1;
        let x = self.rng.gen_range(0..self.target.len());
        LabeledExample {
            x,
            y: self.target.at(x),
        }
    }

    /// MQ: the label of a chosen input.
    pub fn mq_query(&mut self, x: usize) -> Result<i8> {
        self.counter.mq_calls += 1;
        self.target.eval(x)
    }

    pub fn target(&self) -> &TruthTable {
        &self.target
    }
}

impl ExampleSource for ExampleOracle {
    fn n(&self) -> usize {
        self.target.n()
    }

    fn draw_example(&mut self) -> LabeledExample {
        self.ex_draw()
    }

    fn queries(&self) -> QueryCounter {
        self.counter
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::{make_parity, SubsetMask};
    use crate::error::Error;

    #[test]
    fn constant_true_labels() {
        let t = Arc::new(TruthTable::constant(4, -1).unwrap());
        let mut o = ExampleOracle::new(t, RngStream::new(1, "ex", 0));
        for _ in 0..50 {
            assert_eq!(o.ex_draw().y, -1);
        }
        assert_eq!(o.queries().ex_calls, 50);
    }

    #[test]
    fn labels_match_target() {
        let mut rng = RngStream::new(1, "t", 0);
        let t = Arc::new(TruthTable::random(6, &mut rng).unwrap());
        let mut o = ExampleOracle::new(t.clone(), RngStream::new(1, "ex", 1));
        for _ in 0..200 {
            let e = o.ex_draw();
            assert_eq!(e.y, t.at(e.x));
        }
    }

    #[test]
    fn membership_queries() {
        let t = Arc::new(make_parity(3, SubsetMask(1)).unwrap());
        let mut o = ExampleOracle::new(t, RngStream::new(1, "mq", 0));
        assert_eq!(o.mq_query(0b001), Ok(-1));
        assert_eq!(o.mq_query(0b110), Ok(1));
        assert_eq!(
            o.mq_query(8),
            Err(Error::InputOutOfRange { index: 8, n: 3 })
        );
        assert_eq!(o.queries().mq_calls, 3);
        assert_eq!(o.queries().ex_calls, 0);
    }
}
