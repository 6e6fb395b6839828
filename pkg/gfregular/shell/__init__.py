# gfregular shell layer
