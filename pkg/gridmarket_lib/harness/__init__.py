from .config import (CalendarSpec, GridletSpec, ResourceSpec, ScenarioConfig, SweepSpec, UserSpec,
                     config_from_dict, config_to_dict, dump_config, load_config, parse_config)
from .presets import PRESETS, preset_wwg, preset_wwg_sweep, wwg_resources
from .runner import (RESULT_COLUMNS, ResultRow, build_simulation, emit_results, results_frame,
                     run_cell, run_single, run_sweep, sweep_cells)
