from .gis import DirectoryRecord, GridInformationService
from .network import NetEntity
from .ports import IoPort, PortDirection, transfer_delay
from .shutdown import ShutdownCoordinator
from .tags import DEFAULT_BAUD_RATE, Tags
