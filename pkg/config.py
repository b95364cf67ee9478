import os
from dotenv import load_dotenv

load_dotenv()


def get_env(name: str, default: str = "", required: bool = False) -> str:
    """Read an environment variable with validation.
    
    Args:
        name: Environment variable name
        default: Default value if not set
        required: If True, raise ValueError when value is empty/missing
        
    Returns:
        The environment variable value or default
        
    Raises:
        ValueError: If required=True and value is empty/missing
    """
    value = os.getenv(name, default)
    
    if required and not value:
        raise ValueError(
            f"Environment variable '{name}' is required but not set. "
            f"Add it to your .env file or set it in your environment."
        )
    
    return value


def get_int(name: str, default: int) -> int:
    """Read an integer environment variable, falling back to default when unset."""
    raw = get_env(name, str(default)).strip()
    try:
        return int(raw)
    except ValueError:
        raise ValueError(
            f"Environment variable '{name}' must be an integer, got {raw!r}."
        ) from None


# Instance selection
# Options: "dense" | "heisenberg" | "cyclic"
INSTANCE = get_env("AMALGAM_INSTANCE", "dense")
PRIME = get_int("AMALGAM_PRIME", 5)
# Cyclic instance only: factors are Z/p^EXPONENT
EXPONENT = get_int("AMALGAM_EXPONENT", 3)

# Reproducibility: every suite and witness batch is seeded from here
SEED = get_int("AMALGAM_SEED", 1729)

# Random suites
SAMPLES = get_int("AMALGAM_SAMPLES", 1000)
MAX_LEVEL = get_int("AMALGAM_MAX_LEVEL", 6)
MAX_WORD_LENGTH = get_int("AMALGAM_MAX_WORD_LENGTH", 16)

# derived_escape restarts one level higher on a failed precondition, at most this often
RETRY_LIMIT = get_int("AMALGAM_RETRY_LIMIT", 8)
