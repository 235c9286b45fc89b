import logging
import os
from pathlib import Path

import yaml

from src.utils.project import Project

FILE_NAME = 'config.yaml'

logger = logging.getLogger(__name__)


class ConfigManager:
    """
    Manages the configuration settings from a YAML file.
    """

    def __init__(self, config_file: str | Path | None = None):
        """
        Initializes the ConfigManager by setting the path to the configuration file and loading its content.
        :param config_file: Optional explicit path; defaults to config.yaml at the project root.
        """
        self.config_file = Path(config_file) if config_file else Path(os.path.join(Project.get_rootpath(), FILE_NAME))
        self.config = self._load_config()

    def _load_config(self) -> dict:
        """
        Loads the configuration from the YAML file.
        :return: The loaded configuration data
        """
        with open(self.config_file, 'r') as file:
            config = yaml.safe_load(file) or {}
        logger.debug("Loaded configuration from %s", self.config_file)
        return config

    def get_config_value(self, *keys, default=None):
        """
        Retrieves a configuration value based on the provided keys.
        :param keys: Sequence of keys to retrieve the configuration value
        :param default: Default value to return if the key is not found
        :return: The configuration value, or the default value if not found
        """
        value = self.config
        for key in keys:
            if isinstance(value, dict):
                value = value.get(key, default)
            else:
                return default
        return value

    def get_section(self, *keys) -> dict:
        """
        Retrieves a whole configuration section as a dictionary.
        :param keys: Sequence of keys leading to the section.
        :return: A copy of the section, or an empty dictionary when it is missing.
        """
        section = self.get_config_value(*keys, default={})
        return dict(section) if isinstance(section, dict) else {}
