from nsgzero.helpers import DEBUG as DEBUG, VERSION as VERSION
