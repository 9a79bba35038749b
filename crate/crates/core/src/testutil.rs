use crate::benchmarks::benchmark;
use crate::model::ProblemInstance;

pub(crate) fn bench3_instance() -> ProblemInstance {
    benchmark(3).unwrap().load().unwrap()
}
