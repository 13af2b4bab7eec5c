import json
import logging
import os

from utils.validators import ConfigurationError

logger = logging.getLogger(__name__)


class ConfigParser:
    """Reads the JSON experiment file given by --config.

    Keys use the long flag names with dashes or underscores ("n-draws" or
    "n_draws"); the result maps underscore names to values.
    """

    def __init__(self, config_file):
        self.config_file = config_file

    def parse(self):
        if not os.path.exists(self.config_file):
            raise ConfigurationError(f"config file {self.config_file} not found")

        with open(self.config_file, "r", encoding="utf-8") as f:
            try:
                content = json.load(f)
            except json.JSONDecodeError as exc:
                raise ConfigurationError(f"{self.config_file}: invalid JSON ({exc})") from exc

        if not isinstance(content, dict):
            raise ConfigurationError(f"{self.config_file}: expected a JSON object")

        options = {key.replace("-", "_"): value for key, value in content.items()}
        logger.debug("loaded %d options from %s", len(options), self.config_file)
        return options
