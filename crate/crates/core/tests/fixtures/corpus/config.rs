struct Config {
	name: String,
		retries: u32, // nested tab
}

impl Config {
	fn new() -> Self {
		Config { name: "default".to_string(), retries: 3 }
	}
}
