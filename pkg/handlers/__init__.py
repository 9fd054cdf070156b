from handlers import constants, runs, spectrum, study, verify

SUBCOMMANDS = [constants, spectrum, verify, study, runs]

__all__ = ["SUBCOMMANDS", "constants", "spectrum", "verify", "study", "runs"]
