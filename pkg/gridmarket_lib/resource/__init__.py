from .calendar import ResourceCalendar, effective_mips
from .grid_resource import CompletionTick, GridResource, ResourceDynamics
from .machine import AllocationPolicy, Machine, PEStatus, ProcessingElement, ResourceCharacteristics
from .share import (CompletionForecast, ResidentGridlet, ShareTable, forecast_next_completion,
                    pe_share_allocation, share_order)
