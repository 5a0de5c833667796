from .gridlet import Gridlet, GridletBatch, GridletStatus
from .random_mapper import RandomMapper, real_random, standard_pe_rating
from .workload import synth_workload
