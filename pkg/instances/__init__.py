# Instances package
