"""Box-office panel pipeline: slots, decay, theaters, popularity, best responses."""

from attraction.analytics.decay import DecayCurves, decay_stats
from attraction.analytics.inference import (
    BestResponseReport,
    InferredGame,
    best_response_rate,
    counterfactual_box_office,
    infer_popularity,
)
from attraction.analytics.leadtime import lead_time_table, read_decisions
from attraction.analytics.records import DailyRecord, RecordError, read_records, write_records
from attraction.analytics.slots import Holiday, Slot, SlotPanel, partition_slots
from attraction.analytics.synthetic import (
    SyntheticSpec,
    equilibrium_release_slots,
    generate_synthetic_panel,
    generate_theater_panel,
)
from attraction.analytics.theater import TheaterReport, theater_rationality

__all__ = [
    "BestResponseReport",
    "DailyRecord",
    "DecayCurves",
    "Holiday",
    "InferredGame",
    "RecordError",
    "Slot",
    "SlotPanel",
    "SyntheticSpec",
    "TheaterReport",
    "best_response_rate",
    "counterfactual_box_office",
    "decay_stats",
    "equilibrium_release_slots",
    "generate_synthetic_panel",
    "generate_theater_panel",
    "infer_popularity",
    "lead_time_table",
    "partition_slots",
    "read_decisions",
    "read_records",
    "theater_rationality",
    "write_records",
]
