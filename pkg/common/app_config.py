from pydantic import Field
from pydantic_settings import BaseSettings


class BaseConfig(BaseSettings):
    APP_ENV: str = Field(default='development')

    @property
    def ENV(self):
        return self.APP_ENV


class Config(BaseConfig):
    DEBUG: bool = Field(default=False)
    TESTING: bool = Field(default=False)
    LOGLEVEL: str = Field(default='INFO')

    ROLLBAR_ACCESS_TOKEN: str = Field(default="")

    # Process count for preset sweeps; outputs never depend on it
    SWEEP_WORKERS: int = Field(default=1, ge=1)

    OUTPUT_ENCODING: str = 'utf-8'


def get_config() -> Config:
    conf = Config()
    return conf


config = get_config()
