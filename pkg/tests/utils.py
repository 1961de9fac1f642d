

import os
import yaml


def read_yaml(from_path, file_name):
    """Open a YAML case file that sits next to the passed path.

    Args:
        from_path (str)
        file_name (str)

    Returns: dict or list
    """
    path = os.path.join(os.path.dirname(from_path), file_name)

    with open(path, 'r') as fh:
        return yaml.safe_load(fh)


def write_config(path, **fields):
    """Write an instance file, one `key = value` line per field. None
    values are left out.

    Returns: str
    """
    with open(path, 'w') as fh:
        for key, value in fields.items():
            if value is None:
                continue
            if isinstance(value, bool):
                value = 'true' if value else 'false'
            fh.write('%s = %s\n' % (key, value))

    return str(path)
