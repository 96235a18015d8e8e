package com.example.filestore.server;

import java.io.IOException;

import org.slf4j.Logger;
import org.slf4j.LoggerFactory;

import com.example.filestore.FileStore;

/**
 * Dispatches read and write requests to the store.
 */
public class RequestHandler {

    private static final Logger log = LoggerFactory.getLogger(RequestHandler.class);

    private final FileStore store;

    public RequestHandler(FileStore store) {
        this.store = store;
    }

    public byte[] handleGet(String key) throws IOException {
        long start = System.nanoTime();
        byte[] value = store.get(key);
        long elapsedUs = (System.nanoTime() - start) / 1_000;
        if (value == null) {
            log.warn("Get miss for key " + key);
            return null;
        }
        log.info("Served get for key {} in {} us", key, elapsedUs);
        return value;
    }

    public String handlePut(String key, byte[] value) throws IOException {
        long start = System.nanoTime();
        String checksum = store.put(key, value);
        long elapsedUs = (System.nanoTime() - start) / 1_000;
        log.info("Served put for key {} in {} us", key, elapsedUs);
        return checksum;
    }

    public boolean handleExists(String key) {
        boolean present = store.contains(key);
        log.debug("Exists check for key " + key + " -> " + present);
        return present;
    }
}
