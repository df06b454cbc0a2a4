from .checks import (
    CheckResult,
    DecoyCheck,
    ProtocolAbort,
    agent_decoy_check,
    all_checks,
    first_check,
    second_check,
    sift,
)
from .config import DECOY_MODES, SessionConfig
from .keys import code_bits, decode_combined, remap_agent_code
from .records import (
    AgentAction,
    AgentDecoyRecord,
    Announcement,
    DecoyRecord,
    KeyMaterial,
    RoundRecord,
    Transcript,
)
from .session import (
    PreparedRound,
    Session,
    agent_step,
    alice_decode,
    alice_prepare_round,
    publish_announcements,
    run_session,
    select_second_check,
)
