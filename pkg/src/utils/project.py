import os
from pathlib import Path

from dotenv import load_dotenv

OUT_DIR_ENV_VAR = 'HAAR_STATS_OUT_DIR'


class Project:
    @staticmethod
    def get_rootpath() -> Path:
        """
        Returns the root path of the project.

        This function determines the root path of the project by
        getting the absolute path of the directory where this script
        is located.

        :return: The root path of the project as a Path object.
        :rtype: Path
        """
        return Path(__file__).parent.parent.parent.absolute()

    @staticmethod
    def load_environment() -> None:
        """
        Loads a `.env` file from the project root, if one exists. Variables already set in the
        process environment are left untouched.
        :return: None.
        """
        load_dotenv(Project.get_rootpath() / '.env', override=False)

    @staticmethod
    def get_default_out_dir(configured: str | None = None) -> Path:
        """
        Resolves the output directory used when no --out-dir flag is given.
        :param configured: The out_dir value from config.yaml, if any.
        :return: HAAR_STATS_OUT_DIR when set, otherwise the configured value, otherwise
                 `results/` under the project root.
        """
        Project.load_environment()
        from_env = os.environ.get(OUT_DIR_ENV_VAR)
        if from_env:
            return Path(from_env)
        if configured:
            return Path(configured)
        return Project.get_rootpath() / 'results'
