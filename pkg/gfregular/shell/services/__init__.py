# gfregular shell services
