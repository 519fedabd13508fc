//! Serialization round trips for sweep records.

use otto_core::sweep::{emit, read_records, OutputFormat, SweepRecord};
use otto_core::{RegimeLabel, Rotation};
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO
}

fn opt() -> impl Strategy<Value = Option<f64>> {
    prop::option::of(finite())
}

fn regime() -> impl Strategy<Value = Option<RegimeLabel>> {
    prop::option::of(prop::sample::select(vec![
        RegimeLabel::Engine,
        RegimeLabel::Refrigerator,
        RegimeLabel::Accelerator,
        RegimeLabel::Heater,
        RegimeLabel::Boundary,
    ]))
}

prop_compose! {
    fn record()(
        index in 0usize..1_000_000,
        j in opt(),
        temps in prop::array::uniform6(finite()),
        valid in any::<bool>(),
        heats in prop::array::uniform6(opt()),
        regime in regime(),
        rotation in prop::sample::select(vec![Rotation::Ordinary, Rotation::Counter, Rotation::Degenerate]),
        eta in opt(),
        eta_ratio in opt(),
        extra in prop::array::uniform2(finite()),
    ) -> SweepRecord {
        SweepRecord {
            index,
            j,
            lambda_a: temps[0],
            lambda_b: temps[1],
            t_a: temps[2],
            t_b: temps[3],
            beta_a: temps[4],
            beta_b: temps[5],
            valid,
            heat_a: heats[0],
            heat_b: heats[1],
            work_expansion: heats[2],
            work_compression: heats[3],
            work: heats[4],
            idle_flux_a: heats[5],
            regime,
            rotation,
            // invalid records carry no efficiency
            eta: eta.filter(|_| valid),
            eta0: extra[0],
            eta_ratio,
            eta_carnot: extra[1],
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn csv_and_ndjson_round_trip_bit_exact(records in prop::collection::vec(record(), 50..=50)) {
        for format in [OutputFormat::Csv, OutputFormat::Ndjson] {
            let mut buf = Vec::new();
            emit(&records, format, &mut buf).unwrap();
            let back = read_records(buf.as_slice(), format).unwrap();
            prop_assert_eq!(back.len(), records.len());
            for (a, b) in records.iter().zip(&back) {
                prop_assert_eq!(a, b);
                prop_assert_eq!(a.t_a.to_bits(), b.t_a.to_bits());
                prop_assert_eq!(a.work.map(f64::to_bits), b.work.map(f64::to_bits));
            }
            let lines = buf.iter().filter(|&&c| c == b'\n').count();
            let header = usize::from(format == OutputFormat::Csv);
            prop_assert_eq!(lines, records.len() + header);
        }
    }
}
